"""Free-algebra tools for the KZ associator and its logarithm."""
