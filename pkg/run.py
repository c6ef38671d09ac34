#!/usr/bin/env python3
"""
Run script for spectra: forwards its arguments to the command line front end.

    python run.py gadget --which C --m 3
    python run.py reduce --in samples/exactly_two.fo --out phi_prime.fo --report params.json --assume-loop-free
"""

import sys

from spectra.cli import main

if __name__ == "__main__":
    sys.exit(main())
