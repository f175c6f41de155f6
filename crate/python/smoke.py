"""Smoke test for the o2 extension module.

Build and install first, e.g. `pip install --no-build-isolation ./crates/python`.
"""

import o2


def main():
    assert o2.is_balanced("abAB")
    assert not o2.is_balanced("ab")
    assert o2.balance("aab") == [2, 1]
    assert o2.balance("a3A3", n=3) == [0, 0, 0]
    assert o2.bumps("abbAaB") == [("a", 0, 3), ("A", 3, 4)]
    assert o2.is_short("abb") and not o2.is_short("aA")

    tree = o2.parse("aA")
    assert tree.to_sexp() == '(r_z "aA" (r_a "a" "A"))'
    assert tree.rule == "r_z" and tree.args == ["aA"]
    assert tree.children[0].rule == "r_a"

    for word in o2.sample(40, count=20, seed=3):
        for strategy in ("guided", "search"):
            t = o2.parse(word, strategy=strategy)
            assert t.certify() == word
            assert o2.Derivation.from_json(t.to_json()) == t
            assert o2.Derivation.from_sexp(t.to_sexp()) == t
        assert o2.reference_parse(word).certify() == word

    assert o2.sample(12, count=5, seed=9) == o2.sample(12, count=5, seed=9)
    assert len(o2.enumerate_balanced(4)) == 41
    assert o2.decompose("ab", "BA") == (["a", "A"], ["b", "B"])
    assert (["aA"], ["bB"]) in o2.search("aA", "bB")

    try:
        o2.parse("ab")
    except o2.NotBalancedError:
        pass
    else:
        raise AssertionError("unbalanced word parsed")

    bad = o2.Derivation.from_sexp('(r_z "aA" (r_a "a" "a"))')
    assert not bad.is_valid()
    try:
        bad.certify()
    except o2.DerivationError:
        pass
    else:
        raise AssertionError("invalid derivation certified")

    print("python smoke test passed")


if __name__ == "__main__":
    main()
