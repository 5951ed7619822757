"""Bialgebras, Schürmann triples, quantum random walks and their Lévy-process limits."""
