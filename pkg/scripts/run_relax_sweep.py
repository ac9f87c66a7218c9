"""Relaxation sweep toward the NSF reference (about 4 minutes on one core)."""

import sys

from rshs.cli import main

if __name__ == "__main__":
    sys.exit(main(["relax-sweep", "--config", "configs/sweep.json", "--out", "runs/sweep", "-v", *sys.argv[1:]]))
