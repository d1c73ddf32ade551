"""Test data fixtures for snowflake group tests."""

# (p, q) pairs the cover pipeline must verify
COVER_CASES = [(3, 1), (2, 1), (5, 2), (4, 3), (1, 1)]

# Witness identity grid: w_k = a^((2p)^k) for k <= 6
WITNESS_GRID = [(p, q) for p in (1, 2, 3) for q in (1, 2, 3)]
WITNESS_MAX_LEVEL = 6

# Presentation files in the text format
KLEIN_31_TEXT = """gens: a b t
a^-1 b a b
t^-1 a^2 t b^-1 a^-6
"""

COMMENTED_TEXT = """# Z^2
gens: a b

a^-1 b^-1 a b   # commutator
"""

MALFORMED_TEXT = """a b t
a^-1 b a b
"""

# Expected relator strings from the constructors
R_2252_RELATORS = ["x^2 y^-2", "t^-1 x^2 t y^-1 x^-5"]
KLEIN_31_RELATORS = ["a^-1 b a b", "t^-1 a^2 t b^-1 a^-6"]
SNOWFLAKE_31_RELATORS = ["a^-1 b^-1 a b", "s^-1 a s b^-1 a^-3", "t^-1 a t b a^-3"]

# Density search targets
DENSITY_TARGETS = [2.5, 3.0, 3.141592653589793]
