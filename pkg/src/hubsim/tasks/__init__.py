"""Tasks reproducing the simulation campaign."""
