"""Structural checks at the configured equilibrium; writes report.json."""

import sys

from rshs.cli import main

if __name__ == "__main__":
    sys.exit(main(["verify", "--config", "configs/verify.json", "--out", "runs/verify", *sys.argv[1:]]))
