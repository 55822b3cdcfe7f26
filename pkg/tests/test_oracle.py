"""Oracle computation, the canonical byte grammar, and the metrics."""

import itertools
from fractions import Fraction

import pytest
from hypothesis import given, settings

from scmlab import (
    CF1,
    INT1,
    INT_ALL,
    OBS,
    AnswerOracle,
    ExactDist,
    Family,
    HiddenString,
    Mechanism,
    NoiseDist,
    RootedTree,
    Scm,
    build_tree_scm,
    build_xor_scm,
    compute_oracle,
    d_int,
    extract_obs,
    marginal,
    parse,
    serialize,
    tv,
)
from scmlab import gates
from scmlab.errors import (
    BadPositionError,
    KindMismatchError,
    LengthMismatchError,
    OracleFormatError,
)
from scmlab.oracle import component_bits, intervention_key
from scmlab.scm_core import Intervention

from conftest import exact_dists, small_scms

HALF = Fraction(1, 2)

CHAIN2 = build_tree_scm(RootedTree(2, 1, {2: 1}))

CHAIN2_INT1_BYTES = (
    b"INT1 n=2\n"
    b"#obs\n"
    b"00=1/2\n"
    b"11=1/2\n"
    b"#do i=0 b=0\n"
    b"00=1/1\n"
    b"#do i=0 b=1\n"
    b"11=1/1\n"
    b"#do i=1 b=0\n"
    b"00=1/2\n"
    b"10=1/2\n"
    b"#do i=1 b=1\n"
    b"01=1/2\n"
    b"11=1/2\n"
)


def fair_bit_scm() -> Scm:
    return Scm(1, (Mechanism(gates.BERN_SOURCE, (), NoiseDist.bernoulli(HALF)),))


class TestComputeOracle:
    def test_chain_int1_components(self):
        oracle = compute_oracle(CHAIN2, INT1)
        assert oracle.component("obs") == ExactDist(2, {"00": HALF, "11": HALF})
        assert oracle.component("do i=0 b=0") == ExactDist(2, {"00": Fraction(1)})
        assert oracle.component("do i=0 b=1") == ExactDist(2, {"11": Fraction(1)})
        assert oracle.component("do i=1 b=0") == ExactDist(2, {"00": HALF, "10": HALF})
        assert oracle.component("do i=1 b=1") == ExactDist(2, {"01": HALF, "11": HALF})

    def test_component_counts(self):
        n = CHAIN2.n
        assert len(compute_oracle(CHAIN2, OBS).components) == 1
        assert len(compute_oracle(CHAIN2, INT1).components) == 1 + 2 * n
        assert len(compute_oracle(CHAIN2, CF1).components) == n
        assert len(compute_oracle(CHAIN2, INT_ALL).components) == 3**n

    def test_unknown_kind(self):
        with pytest.raises(KindMismatchError):
            compute_oracle(CHAIN2, "ALL")

    def test_component_bits(self):
        assert component_bits(OBS, 4) == 4
        assert component_bits(CF1, 4) == 12


class TestSerialization:
    def test_golden_obs_bytes(self):
        oracle = compute_oracle(fair_bit_scm(), OBS)
        assert serialize(oracle) == b"OBS n=1\n#obs\n0=1/2\n1=1/2\n"

    def test_golden_chain_int1_bytes(self):
        assert serialize(compute_oracle(CHAIN2, INT1)) == CHAIN2_INT1_BYTES

    def test_intervention_keys(self):
        assert intervention_key(Intervention(())) == "do S= x="
        assert intervention_key(Intervention(((0, 1), (2, 0)))) == "do S=0,2 x=10"

    def test_point_masses_serialize_with_denominator(self):
        scm = Scm(1, (Mechanism(gates.CONST1, (), NoiseDist.constant()),))
        assert serialize(compute_oracle(scm, OBS)) == b"OBS n=1\n#obs\n1=1/1\n"

    def test_distinct_oracles_have_distinct_bytes(self):
        zero = Scm(1, (Mechanism(gates.CONST0, (), NoiseDist.constant()),))
        one = Scm(1, (Mechanism(gates.CONST1, (), NoiseDist.constant()),))
        assert serialize(compute_oracle(zero, OBS)) != serialize(
            compute_oracle(one, OBS)
        )

    def test_round_trip_every_kind(self):
        scm = build_xor_scm(HiddenString(2, "10"))
        for kind in (OBS, INT1, CF1, INT_ALL):
            oracle = compute_oracle(scm, kind)
            assert parse(serialize(oracle)) == oracle

    def test_parse_then_serialize_is_identity_on_bytes(self):
        assert serialize(parse(CHAIN2_INT1_BYTES)) == CHAIN2_INT1_BYTES


class TestParseStrictness:
    def test_missing_trailing_newline(self):
        with pytest.raises(OracleFormatError):
            parse(CHAIN2_INT1_BYTES[:-1])

    def test_bad_header(self):
        with pytest.raises(OracleFormatError):
            parse(b"INT2 n=1\n#obs\n0=1/1\n")
        with pytest.raises(OracleFormatError):
            parse(b"OBS n=01\n#obs\n0=1/1\n")

    def test_unsorted_mass_lines_rejected(self):
        with pytest.raises(OracleFormatError):
            parse(b"OBS n=1\n#obs\n1=1/2\n0=1/2\n")

    def test_duplicate_outcome_rejected(self):
        with pytest.raises(OracleFormatError):
            parse(b"OBS n=1\n#obs\n0=1/2\n0=1/2\n")

    def test_not_lowest_terms_rejected(self):
        with pytest.raises(OracleFormatError):
            parse(b"OBS n=1\n#obs\n0=2/4\n1=1/2\n")

    def test_zero_mass_rejected(self):
        with pytest.raises(OracleFormatError):
            parse(b"OBS n=1\n#obs\n0=0/1\n1=1/1\n")

    def test_masses_must_sum_to_one(self):
        with pytest.raises(OracleFormatError):
            parse(b"OBS n=1\n#obs\n0=1/2\n")

    def test_wrong_outcome_length(self):
        with pytest.raises(OracleFormatError):
            parse(b"OBS n=2\n#obs\n0=1/1\n")

    def test_wrong_component_key(self):
        with pytest.raises(OracleFormatError):
            parse(b"OBS n=1\n#observational\n0=1/1\n")

    def test_missing_component(self):
        data = b"INT1 n=1\n#obs\n0=1/2\n1=1/2\n#do i=0 b=0\n0=1/1\n"
        with pytest.raises(OracleFormatError):
            parse(data)

    def test_extra_component(self):
        data = b"OBS n=1\n#obs\n0=1/1\n#obs\n0=1/1\n"
        with pytest.raises(OracleFormatError):
            parse(data)

    def test_crlf_rejected(self):
        with pytest.raises(OracleFormatError):
            parse(b"OBS n=1\r\n#obs\r\n0=1/1\r\n")

    def test_non_ascii_rejected(self):
        with pytest.raises(OracleFormatError):
            parse("OBS n=1\n#obs\n0=\u00bd\n".encode("utf-8"))

    def test_trailing_garbage_rejected(self):
        with pytest.raises(OracleFormatError):
            parse(CHAIN2_INT1_BYTES + b"stray\n")


class TestExtractObs:
    def test_matches_direct_computation(self):
        int1 = compute_oracle(CHAIN2, INT1)
        assert serialize(extract_obs(int1)) == serialize(compute_oracle(CHAIN2, OBS))

    def test_requires_int1(self):
        with pytest.raises(KindMismatchError):
            extract_obs(compute_oracle(CHAIN2, OBS))


class TestTv:
    def test_identical_is_zero(self):
        d = ExactDist(1, {"0": HALF, "1": HALF})
        assert tv(d, d) == 0

    def test_two_point_versus_point(self):
        two = ExactDist(2, {"00": HALF, "11": HALF})
        point = ExactDist(2, {"00": Fraction(1)})
        assert tv(two, point) == HALF

    def test_disjoint_supports(self):
        a = ExactDist(1, {"0": Fraction(1)})
        b = ExactDist(1, {"1": Fraction(1)})
        assert tv(a, b) == 1

    def test_length_mismatch(self):
        with pytest.raises(LengthMismatchError):
            tv(ExactDist(1, {"0": Fraction(1)}), ExactDist(2, {"00": Fraction(1)}))

    @given(exact_dists(), exact_dists())
    @settings(max_examples=60, deadline=None)
    def test_bounds_and_symmetry(self, p, q):
        if p.n_bits != q.n_bits:
            return
        d = tv(p, q)
        assert 0 <= d <= 1
        assert d == tv(q, p)

    @given(exact_dists(max_bits=2), exact_dists(max_bits=2), exact_dists(max_bits=2))
    @settings(max_examples=60, deadline=None)
    def test_triangle_inequality(self, p, q, r):
        if not (p.n_bits == q.n_bits == r.n_bits):
            return
        assert tv(p, r) <= tv(p, q) + tv(q, r)


class TestDInt:
    def test_requires_int1(self):
        obs = compute_oracle(CHAIN2, OBS)
        with pytest.raises(KindMismatchError):
            d_int(obs, obs)

    def test_size_mismatch(self):
        a = compute_oracle(CHAIN2, INT1)
        b = compute_oracle(fair_bit_scm(), INT1)
        with pytest.raises(LengthMismatchError):
            d_int(a, b)

    def test_self_distance_zero(self):
        a = compute_oracle(CHAIN2, INT1)
        assert d_int(a, a) == 0

    def test_matches_brute_force_max(self):
        family = Family("bipartite", 1)
        oracles = [compute_oracle(family.build(g), INT1) for g in family.parameters()]
        a, b = oracles
        brute = max(
            tv(da, db)
            for (_, da), (_, db) in zip(a.components, b.components)
        )
        assert d_int(a, b) == brute == HALF

    def test_xor_family_is_int1_flat(self):
        family = Family("xor", 2)
        oracles = [compute_oracle(family.build(s), INT1) for s in family.parameters()]
        for a, b in itertools.combinations(oracles, 2):
            assert d_int(a, b) == 0


class TestMarginal:
    def test_identity_and_reorder(self):
        d = ExactDist(2, {"01": HALF, "10": HALF})
        assert marginal(d, (0, 1)) == d
        assert marginal(d, (1, 0)) == ExactDist(2, {"10": HALF, "01": HALF})

    def test_single_position(self):
        d = ExactDist(2, {"00": HALF, "11": HALF})
        assert marginal(d, (1,)) == ExactDist(1, {"0": HALF, "1": HALF})

    def test_merges_mass(self):
        d = ExactDist(2, {"00": HALF, "01": HALF})
        assert marginal(d, (0,)) == ExactDist(1, {"0": Fraction(1)})

    def test_out_of_range(self):
        d = ExactDist(1, {"0": Fraction(1)})
        with pytest.raises(BadPositionError):
            marginal(d, (1,))


@given(small_scms())
@settings(max_examples=40, deadline=None)
def test_serialization_round_trip_on_random_scms(scm):
    for kind in (OBS, INT1, CF1):
        oracle = compute_oracle(scm, kind)
        assert parse(serialize(oracle)) == oracle


@given(small_scms(max_n=3))
@settings(max_examples=20, deadline=None)
def test_obs_component_embeds_in_int1(scm):
    obs_bytes = serialize(compute_oracle(scm, OBS))
    int1_bytes = serialize(compute_oracle(scm, INT1))
    assert int1_bytes.split(b"\n", 1)[1].startswith(obs_bytes.split(b"\n", 1)[1])
