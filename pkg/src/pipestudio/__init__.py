"""pipestudio: a low-code ML pipeline workbench.

A block/DSL pipeline backend with schema-validated operators, a live tabular
execution engine, a notebook-mining corpus builder with hybrid-masked task
formulation, a BM25 natural-language operator resolver, and a top-k
evaluation harness, all behind one CLI and an HTTP session API.
"""

__version__ = "0.1.0"
