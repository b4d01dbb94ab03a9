"""
How scoring time grows with average degree
==========================================

MI needs one pass over each common neighbour of a pair. CAR and CRA also
count the links among those common neighbours, which costs roughly another
factor of the degree. Time the full candidate scoring on random graphs of
fixed size and fit the growth exponent in the average degree.
"""

from milinkpred import run_complexity

# Small sizes keep this quick; the command-line default is N=2000 with
# <k> in {4, 8, 16}.
res = run_complexity([800], [4, 8, 16], seed=0, repeats=2)
print(res.table())

exps = {k.value: e for (_, k), e in res.exponents().items()}
print("CAR/CRA grow faster than MI:", exps["car"] > exps["mi"] and exps["cra"] > exps["mi"])
