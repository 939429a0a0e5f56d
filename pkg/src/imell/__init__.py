"""Cut elimination at a distance for intuitionistic MELL proof terms."""

import sys

# Left spines get deep (a normal form of the duplicating family at n=8 nests
# a few hundred frames) and most operations here recurse on the body.
if sys.getrecursionlimit() < 100_000:
    sys.setrecursionlimit(100_000)

__version__ = "0.1.0"
