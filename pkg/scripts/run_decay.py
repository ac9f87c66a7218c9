"""Decay of a small density perturbation at fixed relaxation times."""

import sys

from rshs.cli import main

if __name__ == "__main__":
    sys.exit(main(["decay", "--config", "configs/decay.json", "--out", "runs/decay", "-v", *sys.argv[1:]]))
