"""Exact polyhedral convex analysis: normal cones, subdifferentials, coderivatives."""
__version__ = "0.1.0"
