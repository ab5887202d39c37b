"""GA-BP: genetic-algorithm-initialized BP networks for volatility forecasting."""

__version__ = "1.0.0"
