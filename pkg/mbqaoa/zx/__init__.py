"""ZX-diagram core: phases, diagrams, contraction semantics, rewrite rules and derivations."""
