#!/usr/bin/env python3
"""
GA-BP - volatility forecasting with GA-initialized BP neural networks

Usage:
    python main.py synth --out data.csv     # Simulate a market CSV
    python main.py train --data data.csv    # Train and write run artifacts
    python main.py wizard                   # Build a run configuration interactively
    python main.py --help                   # Show help
"""

import sys
from pathlib import Path

# Add the gabp package to the path
sys.path.insert(0, str(Path(__file__).parent))

from gabp.cli import main


if __name__ == "__main__":
    main()
