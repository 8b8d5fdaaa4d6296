import warnings

import numpy as np
import pytest

from imbalkit.data import (
    ColumnSchema,
    DataError,
    EncodedMatrix,
    SchemaError,
    class_distribution,
    dataset_from_rows,
    decode_row,
    label_encode,
    load_dataset,
    smote,
    stratified_split,
)
from imbalkit.synth import synthetic_dataset, write_dataset_csv, write_schema_json
from imbalkit import load_schema


def tiny_schema():
    return (
        ColumnSchema("color", "categorical", ("red", "blue", "green")),
        ColumnSchema("employed", "binary", ("no", "yes")),
        ColumnSchema("age", "continuous"),
        ColumnSchema("abuse", "binary", ("not abused", "abused")),
    )


def tiny_rows():
    return [
        ("red", "yes", "25.5", "abused"),
        ("blue", "no", "40", "not abused"),
        ("green", "yes", "31", "not abused"),
        ("red", "no", "29", "abused"),
    ]


class TestSchema:
    def test_binary_needs_two_categories(self):
        with pytest.raises(SchemaError):
            ColumnSchema("x", "binary", ("only",))

    def test_continuous_rejects_categories(self):
        with pytest.raises(SchemaError):
            ColumnSchema("x", "continuous", ("a",))

    def test_unknown_kind(self):
        with pytest.raises(SchemaError):
            ColumnSchema("x", "ordinal")

    def test_duplicate_categories(self):
        with pytest.raises(SchemaError):
            ColumnSchema("x", "categorical", ("a", "a"))


class TestLoading:
    def test_unknown_category_names_row_and_column(self):
        rows = tiny_rows()
        rows[2] = ("purple", "yes", "31", "not abused")
        with pytest.raises(DataError, match=r"row 2.*'purple'.*'color'"):
            dataset_from_rows(tiny_schema(), rows, "abuse")

    def test_missing_value_reported(self):
        rows = tiny_rows()
        rows[1] = ("blue", "", "40", "not abused")
        with pytest.raises(DataError, match=r"row 1.*'employed'"):
            dataset_from_rows(tiny_schema(), rows, "abuse")

    def test_non_numeric_continuous(self):
        rows = tiny_rows()
        rows[0] = ("red", "yes", "old", "abused")
        with pytest.raises(DataError, match="non-numeric"):
            dataset_from_rows(tiny_schema(), rows, "abuse")

    def test_header_order_insensitive(self, tmp_path):
        p = tmp_path / "d.csv"
        p.write_text(
            "age,abuse,color,employed\r\n"
            "25.5,abused,red,yes\r\n"
            "40,not abused,blue,no\r\n",
            encoding="utf-8",
        )
        ds = load_dataset(p, tiny_schema(), "abuse")
        assert ds.rows[0] == ("red", "yes", "25.5", "abused")

    def test_missing_column_in_header(self, tmp_path):
        p = tmp_path / "d.csv"
        p.write_text("age,abuse,color\r\n25.5,abused,red\r\n", encoding="utf-8")
        with pytest.raises(DataError, match="missing columns"):
            load_dataset(p, tiny_schema(), "abuse")

    def test_extra_column_in_header(self, tmp_path):
        p = tmp_path / "d.csv"
        p.write_text(
            "age,abuse,color,employed,zz\r\n25.5,abused,red,yes,1\r\n", encoding="utf-8"
        )
        with pytest.raises(DataError, match="unexpected columns"):
            load_dataset(p, tiny_schema(), "abuse")

    def test_synth_roundtrip_through_files(self, tmp_path):
        ds = synthetic_dataset(60, seed=5)
        csv_path = tmp_path / "synth.csv"
        schema_path = tmp_path / "schema.json"
        write_dataset_csv(ds, csv_path)
        write_schema_json(ds.schema, schema_path)
        loaded = load_dataset(csv_path, load_schema(schema_path), ds.target)
        assert loaded.rows == ds.rows


class TestEncoding:
    def test_lexicographic_codes(self):
        ds = dataset_from_rows(tiny_schema(), tiny_rows(), "abuse")
        _, enc = label_encode(ds)
        assert enc.mappings["color"] == {"blue": 0, "green": 1, "red": 2}
        assert enc.mappings["employed"] == {"no": 0, "yes": 1}

    def test_positive_target_class(self):
        ds = dataset_from_rows(tiny_schema(), tiny_rows(), "abuse")
        matrix, _ = label_encode(ds)
        # "abused" is the positive class even though it sorts first
        assert matrix.target.tolist() == [1, 0, 0, 1]

    def test_lexicographic_fallback_for_unrecognized_labels(self):
        schema = (
            ColumnSchema("x", "continuous"),
            ColumnSchema("grp", "binary", ("alpha", "beta")),
        )
        rows = [("1", "alpha"), ("2", "beta")]
        matrix, _ = label_encode(dataset_from_rows(schema, rows, "grp"))
        assert matrix.target.tolist() == [0, 1]

    def test_roundtrip_decode(self):
        ds = dataset_from_rows(tiny_schema(), tiny_rows(), "abuse")
        matrix, enc = label_encode(ds)
        decoded = decode_row(matrix, enc, 0, ds.schema)
        assert decoded["color"] == "red"
        assert decoded["employed"] == "yes"
        assert float(decoded["age"]) == 25.5

    def test_encoding_deterministic(self):
        ds = synthetic_dataset(80, seed=11)
        m1, _ = label_encode(ds)
        m2, _ = label_encode(ds)
        assert np.array_equal(m1.values, m2.values)
        assert np.array_equal(m1.target, m2.target)

    def test_row_ids_are_original_positions(self):
        ds = dataset_from_rows(tiny_schema(), tiny_rows(), "abuse")
        matrix, _ = label_encode(ds)
        assert matrix.row_ids.tolist() == [0, 1, 2, 3]


class TestStratifiedSplit:
    def test_per_class_test_counts(self):
        # 30/70 at fraction 0.2 -> 6 and 14 test rows
        values = np.arange(100, dtype=float).reshape(-1, 1)
        target = np.r_[np.zeros(30, int), np.ones(70, int)]
        m = EncodedMatrix(values, target, ("x",), np.arange(100))
        train, test = stratified_split(m, 0.2, seed=0)
        assert int((test.target == 0).sum()) == 6
        assert int((test.target == 1).sum()) == 14
        assert train.n_rows == 80

    def test_partition_is_exact(self, small_matrix):
        train, test = stratified_split(small_matrix, 0.25, seed=9)
        ids = np.concatenate([train.row_ids, test.row_ids])
        assert sorted(ids.tolist()) == sorted(small_matrix.row_ids.tolist())

    def test_seed_determinism(self, small_matrix):
        a = stratified_split(small_matrix, 0.2, seed=123)
        b = stratified_split(small_matrix, 0.2, seed=123)
        assert np.array_equal(a[1].row_ids, b[1].row_ids)
        c = stratified_split(small_matrix, 0.2, seed=124)
        assert not np.array_equal(a[1].row_ids, c[1].row_ids)

    def test_rejects_bad_fraction(self, small_matrix):
        for frac in (0.0, 1.0, -0.1, 1.5):
            with pytest.raises(DataError):
                stratified_split(small_matrix, frac, seed=0)


def imbalanced_matrix(n_min=20, n_maj=80, d=4, seed=2):
    rng = np.random.default_rng(seed)
    values = rng.normal(size=(n_min + n_maj, d))
    target = np.r_[np.ones(n_min, int), np.zeros(n_maj, int)]
    return EncodedMatrix(values, target, tuple(f"f{j}" for j in range(d)),
                         np.arange(n_min + n_maj))


class TestSmote:
    def test_exact_balance(self):
        m = imbalanced_matrix()
        out = smote(m, seed=0)
        bal = class_distribution(out)
        assert bal.count_class0 == bal.count_class1 == 80

    def test_majority_rows_untouched(self):
        m = imbalanced_matrix()
        out = smote(m, seed=0)
        maj_in = m.values[m.target == 0]
        maj_out = out.values[(out.target == 0)]
        assert np.array_equal(np.sort(maj_in, axis=0), np.sort(maj_out, axis=0))

    def test_synthetic_ids_fresh_and_negative(self):
        m = imbalanced_matrix()
        out = smote(m, seed=0)
        new = out.row_ids[m.n_rows:]
        assert np.all(new < 0)
        assert len(set(new.tolist())) == new.size

    def test_segment_membership_two_point_minority(self):
        # with exactly two minority rows every synthetic point lies on the
        # segment joining them
        values = np.array([[0.0, 0.0], [1.0, 2.0]] + [[5.0, 5.0]] * 6)
        target = np.r_[np.ones(2, int), np.zeros(6, int)]
        m = EncodedMatrix(values, target, ("a", "b"), np.arange(8))
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            out = smote(m, k_neighbors=5, seed=3)
        synth = out.values[8:]
        # each row is (1-u)*p + u*q for u in [0,1]
        u = synth[:, 1] / 2.0
        assert np.all((u >= 0) & (u <= 1))
        np.testing.assert_allclose(synth[:, 0], u * 1.0, atol=1e-12)

    def test_interpolant_within_minority_bounding_box(self):
        m = imbalanced_matrix(n_min=15, n_maj=60)
        out = smote(m, seed=7)
        minority = m.values[m.target == 1]
        synth = out.values[m.n_rows:]
        lo, hi = minority.min(axis=0), minority.max(axis=0)
        assert np.all(synth >= lo - 1e-12)
        assert np.all(synth <= hi + 1e-12)

    def test_k_clamped_with_warning(self):
        m = imbalanced_matrix(n_min=3, n_maj=30)
        with pytest.warns(UserWarning, match="clamped"):
            out = smote(m, k_neighbors=10, seed=0)
        bal = class_distribution(out)
        assert bal.count_class0 == bal.count_class1

    def test_balanced_input_is_noop(self):
        m = imbalanced_matrix(n_min=20, n_maj=20)
        out = smote(m, seed=0)
        assert out is m

    def test_single_minority_row_rejected(self):
        m = imbalanced_matrix(n_min=1, n_maj=10)
        with pytest.raises(DataError):
            smote(m, seed=0)

    def test_nearest_code_rounding_gives_valid_codes(self):
        rng = np.random.default_rng(4)
        cats = rng.integers(0, 4, size=(40, 2)).astype(float)
        cont = rng.normal(size=(40, 1))
        values = np.hstack([cats, cont])
        target = np.r_[np.ones(10, int), np.zeros(30, int)]
        m = EncodedMatrix(values, target, ("c0", "c1", "x"), np.arange(40))
        out = smote(m, seed=5, rounding="nearest-code",
                    categorical_columns=(0, 1), category_sizes={0: 4, 1: 4})
        synth = out.values[40:]
        for j in (0, 1):
            col = synth[:, j]
            assert np.array_equal(col, np.rint(col))
            assert col.min() >= 0 and col.max() <= 3

    def test_continuous_mode_leaves_fractional_codes(self):
        m = imbalanced_matrix()
        out = smote(m, seed=1, rounding="continuous")
        synth = out.values[m.n_rows:]
        assert not np.array_equal(synth, np.rint(synth))

    def test_seed_determinism(self):
        m = imbalanced_matrix()
        a = smote(m, seed=9)
        b = smote(m, seed=9)
        assert np.array_equal(a.values, b.values)
        c = smote(m, seed=10)
        assert not np.array_equal(c.values, a.values)

    def test_unknown_rounding_mode(self):
        with pytest.raises(DataError):
            smote(imbalanced_matrix(), rounding="floor")
