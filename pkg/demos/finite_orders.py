"""Exact quantiles on finite partially ordered label sets.

Uses the bundled study of 1600 subjects classified by two interventions and
a pass/fail outcome, ordered so that every failing cell sits below every
passing cell and fewer interventions are preferred within the same outcome.
All arithmetic is exact (fractions), so the printed values are not
approximations.
"""

from fractions import Fraction

from partialq import datasets, finite_quantiles


def main():
    dist, order = datasets.thks_study()
    taus = [Fraction(1, 4), Fraction(1, 2), Fraction(3, 4)]
    table = finite_quantiles(dist, order, taus=taus)

    print("label                 mass        tau          p")
    for row in sorted(table.rows, key=lambda r: str(r.label)):
        tau_txt = str(row.tau) if row.tau is not None else "undefined"
        print(f"{str(row.label):<20}  {str(dist.mass(row.label)):>8}  "
              f"{tau_txt:>12}  {str(row.p):>9}")

    for tau in taus:
        print(f"\nQ({tau}) = {table.surfaces[tau]}")
        print(f"argmax at {tau}: {table.argmax[tau]}")

    print("\nA small synthetic DAG with a unique middle element:")
    dist2, order2 = datasets.demo_dag()
    table2 = finite_quantiles(dist2, order2, taus=[Fraction(1, 2)])
    print(f"partial median: {table2.argmax[Fraction(1, 2)]}")


if __name__ == "__main__":
    main()
