"""Write a small scenario in the text format, run it, then break it on purpose."""
from defverify.scenarios import parse_scenario, print_scenario, run_custom
from defverify.syntax import DSLError

TEXT = """\
# A derivation-like shift that survives on the cusp only in characteristic 2.
p=2
ring T gens t t^-1
ring R gens t^2 t^3
map beta R->R t -> t + eps*t^-2
map shift T->T t -> t + eps*t^-2
check well_defined beta
check well_defined shift
check iso shift
check member t^5 R
"""


def main():
    spec = parse_scenario(TEXT)
    print("Canonical form:\n" + print_scenario(spec))
    report = run_custom(spec)
    for c in report.checks:
        print(f"[{c.status}] {c.name}: {c.detail}")

    print("\nThe same map in characteristic 3 is no longer an endomorphism of the cusp:")
    spec3 = parse_scenario(TEXT.replace("p=2", "p=3").replace("t^2 t^3", "t^3 t^4"))
    for c in run_custom(spec3).checks:
        if c.name == "well_defined beta":
            print(f"[{c.status}] {c.detail}")

    print("\nMistakes are reported with a position:")
    for bad in ("p=6", "ring R gens t^2 t^3\nmap f R->Q t -> t", "map f R->R t -> (t + eps"):
        try:
            parse_scenario(bad)
        except DSLError as exc:
            print(f"  {exc}")


if __name__ == "__main__":
    main()
