"""Exact symbolic stationary distributions for exclusion processes."""
