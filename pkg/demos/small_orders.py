"""The degenerate orders k = 1, 2 and the u = 1 case k = 4.

For k = 1 and 2 the models still are spin models, but the Hadamard
scheme collapses; compare their Nomura algebras with the cyclic schemes.
At k = 4 the parameter u is forced onto the unit circle and the algebra
is much larger than the five-class scheme.
"""
from spinkit import verify_remark, verify_theorem
from spinkit.errors import Failed
from spinkit.hadamard import standard
from spinkit.numbers import make_context

for k in (1, 2):
    try:
        rep = verify_remark(k)
        data = rep.data
        print(f"k={k}: pass")
    except Failed as exc:
        data = exc.witness
        print(f"k={k}: fail: {'; '.join(data['problems'])}")
    for name, m in data["models"].items():
        print(f"  {name}: dimension {m['dimension']}, sizes {m['sizes']}, "
              f"all classes symmetric {m.get('all_classes_symmetric')}")

try:
    verify_theorem(standard(4), make_context(4))
    print("k=4: pass")
except Failed as exc:
    w = exc.witness
    print(f"k=4: clause ({w['clause']}) fails; dim N(W) = {w['dimension_W']}, "
          f"dim N(W') = {w['dimension_Wp']}; clauses {w['clauses']}")
