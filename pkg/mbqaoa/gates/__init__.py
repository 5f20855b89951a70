"""Gate-model oracle: gate ops, dense statevector simulation and QAOA circuit builders."""
