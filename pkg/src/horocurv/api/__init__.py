"""Command-line surface of horocurv."""
