import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from optcut.core import ScoreMatrix, median_cutoffs
from optcut.data import (InstanceSpec, demo_table1, generate_instance,
                         generate_instance_with_cov, parse_csv, round_half_away, to_csv)
from optcut.errors import ParseError


class TestParse:
    def test_id_column(self):
        S = parse_csv("a,1.0,2.0\nb,3.0,4.0")
        assert (S.n, S.m) == (2, 2)
        assert S.ids == ("a", "b")
        assert S.values.tolist() == [[1.0, 2.0], [3.0, 4.0]]

    def test_bad_cell_location(self):
        with pytest.raises(ParseError) as err:
            parse_csv("1.0\n2.0\nx")
        assert (err.value.row, err.value.column) == (3, 1)
        assert "row 3" in str(err.value) and "column 1" in str(err.value)

    def test_header_and_default_ids(self):
        S = parse_csv("s1,s2\n1,2\n3,4\n")
        assert S.ids == ("1", "2") and S.m == 2

    def test_numeric_ids_named_in_header(self):
        S = parse_csv("item_id,s1\n10,0.5\n20,0.25\n")
        assert S.ids == ("10", "20") and S.values.ravel().tolist() == [0.5, 0.25]

    def test_ragged(self):
        with pytest.raises(ParseError) as err:
            parse_csv("1,2\n3\n")
        assert err.value.row == 2

    def test_non_numeric_score_with_ids(self):
        with pytest.raises(ParseError) as err:
            parse_csv("a,1\nb,zz\n")
        assert (err.value.row, err.value.column) == (2, 2)

    def test_empty(self):
        with pytest.raises(ParseError):
            parse_csv("\n\n")
        with pytest.raises(ParseError):
            parse_csv("a,b\n")

    def test_table1_round_trip(self, table1):
        assert parse_csv(to_csv(table1)) == table1

    @settings(max_examples=100, deadline=None)
    @given(st.lists(st.lists(st.floats(-1e6, 1e6, allow_nan=False), min_size=2, max_size=2),
                    min_size=1, max_size=8))
    def test_round_trip(self, rows):
        S = ScoreMatrix.from_rows(rows, ids=[f"it{i}" for i in range(len(rows))])
        assert parse_csv(to_csv(S)) == S


class TestTable1:
    def test_rows(self):
        S = demo_table1()
        assert (S.n, S.m) == (50, 3)
        assert S.values[0].tolist() == [-1.25, -0.94, -0.53]
        assert S.values[22].tolist() == [2.03, -0.16, 1.61]
        assert S.values[49].tolist() == [-0.20, 0.22, -0.04]
        assert S.ids[0] == "1" and S.ids[-1] == "50"

    def test_medians(self):
        assert median_cutoffs(demo_table1()) == pytest.approx((0.275, -0.025, -0.04), abs=1e-12)


class TestGenerator:
    def test_deterministic(self):
        spec = InstanceSpec(n=2, m=1, seed=42)
        assert generate_instance(spec) == generate_instance(spec)

    def test_streams_differ(self):
        spec = InstanceSpec(n=20, m=3, seed=42)
        assert generate_instance(spec, 0) != generate_instance(spec, 1)
        assert generate_instance(spec, 0) != generate_instance(InstanceSpec(n=20, m=3, seed=43), 0)

    def test_integers(self):
        S = generate_instance(InstanceSpec(n=100, m=3, seed=1))
        assert np.array_equal(S.values, np.round(S.values))

    def test_pinned_values(self):
        # frozen output of PCG64 seeded with (7, 0, 0); guards against silent stream changes
        S = generate_instance(InstanceSpec(n=3, m=2, seed=7))
        assert S.values.tolist() == FROZEN_SEED7

    def test_covariance(self):
        spec = InstanceSpec(n=100_000, m=3, seed=3)
        S, cov = generate_instance_with_cov(spec)
        sample = np.cov(S.values, rowvar=False)
        target = spec.scale ** 2 * cov
        assert np.linalg.norm(sample - target) / np.linalg.norm(target) < 0.05

    def test_round_half_away(self):
        x = np.array([0.5, -0.5, 1.5, -2.5, 2.4999, -0.2])
        assert round_half_away(x).tolist() == [1.0, -1.0, 2.0, -3.0, 2.0, -0.0]

    def test_spec_validation(self):
        with pytest.raises(ValueError):
            InstanceSpec(n=1)
        with pytest.raises(ValueError):
            InstanceSpec(scale=0)


FROZEN_SEED7 = [[-12.0, -70.0], [2.0, 45.0], [-13.0, -62.0]]
