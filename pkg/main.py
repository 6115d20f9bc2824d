"""
Command-line entry point for hqvi.

Usage:
    python main.py compute --genus 13 --n 3 --ranks 1,2 --insertion "1"
    python main.py solve --n 3 --genus 0 --ranks 1,2 --q "0.7+0.2i,1.1-0.4i"
    python main.py verify --only twisting
"""

from hqvi.cli import main


if __name__ == "__main__":
    raise SystemExit(main())
