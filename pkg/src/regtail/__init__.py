"""Desk-scale lab for upper tails of regular-subgraph counts in sparse
Erdos-Renyi graphs: exact counting oracles, closed-form inequality
evaluators, spanned-subgraph structure, seed/core peeling, and Monte Carlo
tail estimation."""

__version__ = "0.1.0"
