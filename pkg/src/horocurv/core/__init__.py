"""Core numerical routines: geodesic transport, the Riccati solver, horosphere and Liouville checks."""
