"""Walk through the Hadamard spin models of order 4k for one k.

    python3 demos/hadamard_models.py 8
"""
import sys

from spinkit import build_model, nomura_algebra, standard, type2_check, type3_check
from spinkit.nomura import membership_test
from spinkit.numbers import make_context
from spinkit.schemes import directed_family, same_family, scheme_check, symmetric_family


def main(k):
    H = standard(k)
    ctx = make_context(k)
    print(f"H: order {k}, source {H.source}; u mode {ctx.u_mode.describe()}, backend {ctx.backend}")

    for kind, family in (("W", symmetric_family(H)), ("Wp", directed_family(H))):
        M = build_model(kind, H, ctx)
        t2 = type2_check(M, ctx)
        t3 = type3_check(M, ctx, samples=2000)
        print(f"\n{kind}: {M.n}x{M.n}, type II {t2.verdict}, type III {t3.verdict} "
              f"(d = {t3.data.get('working_d'):.4f})")

        res = nomura_algebra(M, ctx)
        print(f"  Nomura algebra: dimension {res.dimension}, class sizes {res.sizes}, "
              f"ambiguous zero tests {res.ambiguity_count}")
        rep, spec = scheme_check(res.basis)
        print(f"  basis is an association scheme: {rep.passed}, valencies {rep.data['valencies']}")
        print(f"  equals the Hadamard scheme: {same_family(res.basis, family)}")
        members = all(membership_test(B, M, ctx).passed for B in res.basis)
        print(f"  every basis matrix satisfies the eigenvector definition: {members}")


if __name__ == "__main__":
    main(int(sys.argv[1]) if len(sys.argv) > 1 else 8)
