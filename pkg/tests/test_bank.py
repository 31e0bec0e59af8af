import numpy as np
import pytest

from fixedform import (
    BankFormatError,
    BankGenSpec,
    ParameterError,
    generate_bank,
    load_bank,
    save_bank,
)


class TestBankGenSpec:
    def test_defaults_follow_the_standard_recipe(self):
        spec = BankGenSpec()
        assert spec.m == 300
        assert spec.a_range == (1.0, 3.0)
        assert spec.b_range == (-3.0, 3.0)
        assert spec.c_fixed == 0.2

    @pytest.mark.parametrize(
        "kwargs",
        [
            dict(m=0),
            dict(a_range=(0.0, 1.0)),
            dict(a_range=(2.0, 1.0)),
            dict(b_range=(1.0, -1.0)),
            dict(c_fixed=1.0),
            dict(c_fixed=1.5),
            dict(c_fixed=-0.2),
            dict(seed=-1),
        ],
    )
    def test_invalid_specs_rejected(self, kwargs):
        with pytest.raises(ParameterError):
            BankGenSpec(**kwargs)


class TestGenerateBank:
    def test_deterministic_per_seed(self):
        one = generate_bank(BankGenSpec(m=50, seed=9))
        two = generate_bank(BankGenSpec(m=50, seed=9))
        other = generate_bank(BankGenSpec(m=50, seed=10))
        assert one == two
        assert one != other

    def test_parameters_within_ranges(self):
        bank = generate_bank(BankGenSpec(m=200, seed=3))
        assert bank.m == 200
        assert np.all((bank.a_values >= 1.0) & (bank.a_values <= 3.0))
        assert np.all((bank.b_values >= -3.0) & (bank.b_values <= 3.0))
        assert np.all(bank.c_values == 0.2)

    def test_larger_bank_variant(self):
        bank = generate_bank(BankGenSpec(m=753, seed=7))
        assert bank.m == 753
        assert np.all((bank.a_values >= 1.0) & (bank.a_values <= 3.0))


class TestBankIO:
    def test_round_trip_exact(self, tmp_path):
        bank = generate_bank(BankGenSpec(m=25, seed=4))
        path = tmp_path / "bank.csv"
        save_bank(bank, path)
        loaded = load_bank(path)
        assert loaded == bank  # exact float equality via repr round trip

    def test_header_written(self, tmp_path):
        bank = generate_bank(BankGenSpec(m=2, seed=1))
        path = tmp_path / "bank.csv"
        save_bank(bank, path)
        lines = path.read_text().splitlines()
        assert lines[0] == "id,a,b,c"
        assert len(lines) == 3

    @pytest.mark.parametrize(
        "content,fragment",
        [
            ("a,b,c\n1.0,0.0,0.2\n", "header"),
            ("id,a,b,c\n1,1.0,0.0,0.2\n", "contiguous"),
            ("id,a,b,c\n0,1.0,0.0\n", "fields"),
            ("id,a,b,c\n0,1.0,0.0,0.2\n2,1.0,0.0,0.2\n", "contiguous"),
            ("id,a,b,c\n0,oops,0.0,0.2\n", "float"),
            ("id,a,b,c\n0,-1.0,0.0,0.2\n", "discrimination"),
            ("id,a,b,c\n0,1.0,0.0,1.2\n", "guessing"),
            ("id,a,b,c\n", "no items"),
        ],
    )
    def test_malformed_files_rejected(self, tmp_path, content, fragment):
        path = tmp_path / "bad.csv"
        path.write_text(content)
        with pytest.raises(BankFormatError, match=fragment):
            load_bank(path)

    def test_error_names_the_line(self, tmp_path):
        path = tmp_path / "bad.csv"
        path.write_text("id,a,b,c\n0,1.0,0.0,0.2\n1,zap,0.0,0.2\n")
        with pytest.raises(BankFormatError, match="line 3"):
            load_bank(path)

    def test_missing_file_is_oserror(self, tmp_path):
        with pytest.raises(OSError):
            load_bank(tmp_path / "nope.csv")
