"""Pearl complexes: validation, collapse, windows, cohomology tables."""

import random

import pytest

from pearlgysin.chains import Cochain
from pearlgysin.complexes import (
    DiffTerm,
    Generator,
    PearlData,
    build_complex,
    check_d_squared,
    check_euler_balance,
    classical_complex,
    cohomology,
    pin_at_degree,
)
from pearlgysin.errors import DegreeViolation, EngineError, NotCocycle, UnknownGenerator
from tests.conftest import lambda_windowed_dims, random_bipartite

# ---------------------------------------------------------------------------
# validation
# ---------------------------------------------------------------------------


def _tiny(n=2, terms=(), unit=("m",)):
    gens = [Generator("m", 0), Generator("x", 1), Generator("y", 2)]
    return PearlData("tiny", n, gens, list(terms), unit=list(unit))


def test_degree_law_violation_names_the_term():
    bad = DiffTerm("y", "m", 1, 1)  # 2 + 1*2 != 0 + 1
    with pytest.raises(DegreeViolation) as err:
        build_complex(_tiny(terms=[bad]))
    assert err.value.term == bad


def test_negative_exponent_rejected():
    gens = [Generator("m", 0), Generator("w", 3)]
    bad = DiffTerm("w", "m", -1, 1)  # 3 - 2 == 0 + 1 but negative power
    with pytest.raises(DegreeViolation):
        build_complex(PearlData("neg", 2, gens, [bad], unit=["m"]))


def test_unknown_generator_in_terms():
    with pytest.raises(UnknownGenerator):
        build_complex(_tiny(terms=[DiffTerm("ghost", "m", 1, 1)]))


def test_duplicate_generator_and_duplicate_pair_rejected():
    gens = [Generator("m", 0), Generator("m", 0)]
    with pytest.raises(EngineError):
        build_complex(PearlData("dup", 2, gens, [], unit=["m"]))
    data = _tiny(terms=[DiffTerm("x", "m", 0, 1), DiffTerm("x", "m", 0, 1)])
    with pytest.raises(EngineError):
        build_complex(data)


def test_unit_must_be_degree_zero():
    with pytest.raises(EngineError):
        build_complex(_tiny(unit=("x",)))


def test_primed_ids_are_reserved_for_the_bundle():
    gens = [Generator("m'", 0)]
    with pytest.raises(EngineError):
        build_complex(PearlData("primed", 2, gens, []))


def test_counts_are_mod_two():
    with pytest.raises(EngineError):
        build_complex(_tiny(terms=[DiffTerm("x", "m", 0, 2)]))


# ---------------------------------------------------------------------------
# differential and collapse
# ---------------------------------------------------------------------------


def test_differential_applies_terms_with_exponents():
    gens = [Generator("m", 0), Generator("w", 3)]
    data = PearlData("q", 2, gens, [DiffTerm("m", "w", 2, 1)], unit=["m"])
    cx = build_complex(data)
    img = cx.d(Cochain.term("w"))
    assert img.coefficient("m") == frozenset({2})
    assert not cx.d(Cochain.term("m"))


def test_count_zero_terms_are_dropped():
    gens = [Generator("m", 0), Generator("w", 3)]
    data = PearlData("q0", 2, gens, [DiffTerm("m", "w", 2, 0)], unit=["m"])
    cx = build_complex(data)
    assert not cx.d(Cochain.term("w"))


def test_d_squared_check_fails_on_bad_data():
    gens = [Generator("a", 0), Generator("b", 1), Generator("c", 2)]
    data = PearlData(
        "notcomplex", 5, gens,
        [DiffTerm("b", "a", 0, 1), DiffTerm("c", "b", 0, 1)],
    )
    cx = build_complex(data)
    assert not check_d_squared(cx).ok


def test_corpus_d_squared_holds(corpus):
    for name, ds in corpus.items():
        cx = build_complex(ds.pearl)
        assert check_d_squared(cx).ok, name


def test_collapsed_dims_match_independent_laurent_window_oracle(corpus):
    for name, ds in corpus.items():
        cx = build_complex(ds.pearl)
        table = cohomology(cx)
        oracle = lambda_windowed_dims(ds.pearl)
        got = {k: table.dim(k) for k in range(ds.pearl.N)}
        assert got == oracle, name


def test_collapsed_dims_match_oracle_on_random_complexes():
    rng = random.Random(987)
    for trial in range(150):
        n = rng.choice([2, 3, 4])
        data = random_bipartite(rng, n, name=f"r{trial}")
        table = cohomology(build_complex(data))
        oracle = lambda_windowed_dims(data)
        assert {k: table.dim(k) for k in range(n)} == oracle, f"trial {trial}"


def test_euler_balance_on_corpus(corpus):
    for name, ds in corpus.items():
        cx = build_complex(ds.pearl)
        assert check_euler_balance(cx).ok, name


def test_classical_complex_reproduces_betti_hints(corpus):
    for name, ds in corpus.items():
        hint = ds.pearl.betti_hint
        if hint is None:
            continue
        z2 = classical_complex(build_complex(ds.pearl))
        dims = {d: q.dim for d, q in z2.cohomology().items()}
        top = max(len(hint) - 1, max(dims, default=0))
        assert [dims.get(k, 0) for k in range(top + 1)] == [
            hint[k] if k < len(hint) else 0 for k in range(top + 1)
        ], name


# ---------------------------------------------------------------------------
# cohomology tables and representatives
# ---------------------------------------------------------------------------


def test_representatives_are_honest_laurent_cocycles(corpus):
    for name, ds in corpus.items():
        cx = build_complex(ds.pearl)
        table = cohomology(cx)
        for r in range(ds.pearl.N):
            for rep in table.representatives(r):
                pinned = pin_at_degree(cx, rep, r)
                assert not cx.d(pinned), (name, r)


def test_representative_at_pins_degrees():
    gens = [Generator("m", 0), Generator("M", 2)]
    data = PearlData("s", 2, gens, [], unit=["m"])
    cx = build_complex(data)
    table = cohomology(cx)
    rep = table.representative_at(0, 0, 4)
    # degree 4 in residue 0: M carries t^1, m carries t^2
    for gid, exps in rep.items():
        d = {"m": 0, "M": 2}[gid]
        assert all(d + e * 2 == 4 for e in exps)


def test_coords_rejects_non_cocycles():
    gens = [Generator("a", 0), Generator("b", 1)]
    data = PearlData("arrow", 3, gens, [DiffTerm("b", "a", 0, 1)])
    cx = build_complex(data)
    table = cohomology(cx)
    with pytest.raises(NotCocycle):
        table.coords(Cochain.term("a"), 0)


def test_vector_of_rejects_stray_generators():
    cx = build_complex(_tiny())
    table = cohomology(cx)
    with pytest.raises(EngineError):
        table.coords(Cochain.term("zzz"), 0)


def test_quantum_dims_differ_from_classical_when_twisting_by_t():
    # d(a) = t*b with |a| = 0, |b| = -3, N = 4: classically (t = 0) both
    # survive, quantum-mechanically they cancel each other.
    gens = [Generator("a", 0), Generator("b", -3)]
    data = PearlData("cancel", 4, gens, [DiffTerm("b", "a", 1, 1)])
    cx = build_complex(data)
    table = cohomology(cx)
    assert [table.dim(k) for k in range(4)] == [0, 0, 0, 0]
    z2 = classical_complex(cx)
    dims = {d: q.dim for d, q in z2.cohomology().items()}
    assert dims.get(0, 0) == 1 and dims.get(-3, 0) == 1
