"""Problem instances: QUBO, MaxCut and MIS with exact brute-force baselines."""
