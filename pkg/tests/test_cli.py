import json

import numpy as np
import pytest

from grasspack.cli import main
from grasspack.codebooks import load_codebook, proposed_codebook_4_2, save_codebook


def run(args):
    return main([str(a) for a in args])


class TestDesign:
    def test_prop42_matches_embedded_constant(self, tmp_path, capsys):
        out = tmp_path / "prop.json"
        assert run(["design", "--method", "prop42", "--out", out]) == 0
        assert "mcd=1.000000000000" in capsys.readouterr().out
        loaded = load_codebook(out)
        for a, b in zip(loaded.codewords, proposed_codebook_4_2().codewords):
            assert np.array_equal(a.matrix, b.matrix)

    def test_design_file_equals_direct_save(self, tmp_path):
        out = tmp_path / "prop.json"
        run(["design", "--method", "prop42", "--out", out])
        direct = tmp_path / "direct.json"
        save_codebook(proposed_codebook_4_2(), direct)
        assert out.read_bytes() == direct.read_bytes()

    def test_sparse2m_quarter_grid_mcd_one(self, tmp_path, capsys):
        out = tmp_path / "sp.json"
        assert run(
            ["design", "--method", "sparse2m", "-M", 2, "--size", 22, "--grid", "quarter", "--out", out]
        ) == 0
        assert "mcd=1.000000000000" in capsys.readouterr().out

    def test_size_zero_usage_error(self, tmp_path, capsys):
        code = run(["design", "--method", "sparse2m", "-M", 2, "--size", 0, "--out", tmp_path / "x.json"])
        assert code != 0
        assert "error" in capsys.readouterr().err

    def test_indices_subset(self, tmp_path):
        out = tmp_path / "nr8.json"
        run(["design", "--method", "nr42", "--indices", "15-22", "--out", out])
        book = load_codebook(out)
        assert len(book) == 8
        nr_full = tmp_path / "nr.json"
        run(["design", "--method", "nr42", "--out", nr_full])
        full = load_codebook(nr_full)
        assert np.array_equal(book[0].matrix, full[14].matrix)

    def test_manifest_written(self, tmp_path):
        out = tmp_path / "e.json"
        run(["design", "--method", "expmap", "-T", 4, "-M", 2, "--size", 4, "--out", out])
        manifest = json.loads((tmp_path / "e.json.manifest.json").read_text())
        assert manifest["command"] == "design"
        assert manifest["outputs"] == [str(out)]
        assert manifest["seed"] == 0
        assert manifest["parameters"]["size"] == 4


class TestMcd:
    def test_csv_row_per_file(self, tmp_path):
        prop, nr = tmp_path / "p.json", tmp_path / "n.json"
        run(["design", "--method", "prop42", "--out", prop])
        run(["design", "--method", "nr42", "--out", nr])
        out = tmp_path / "mcd.csv"
        assert run(["mcd", prop, nr, "--out", out]) == 0
        lines = out.read_text().splitlines()
        assert lines[0] == "file,size,mcd,argmin_i,argmin_j"
        assert lines[1].endswith(",22,1,1,2")
        assert lines[2].endswith(",22,0,15,16")

    def test_single_codeword_file_errors(self, tmp_path, capsys):
        one = tmp_path / "one.json"
        run(["design", "--method", "nr42", "--indices", "1", "--out", one])
        assert run(["mcd", one]) != 0

    def test_missing_file_errors(self, tmp_path):
        assert run(["mcd", tmp_path / "nope.json"]) != 0


class TestRate:
    def test_identical_codebooks_zero_diff(self, tmp_path):
        prop = tmp_path / "p.json"
        run(["design", "--method", "prop42", "--out", prop])
        out = tmp_path / "rate.csv"
        assert run(
            ["rate", "--codebooks", prop, prop, "-N", 8, "--snr-db", "10:10:1",
             "--trials", 50, "--seed", 1, "--out", out]
        ) == 0
        header, row = out.read_text().splitlines()
        assert header.startswith("snr_db,rate_p,rate_p,diff_p_vs_p")
        assert row.split(",")[3] == "0"

    def test_rerun_byte_identical(self, tmp_path):
        prop, nr = tmp_path / "p.json", tmp_path / "n.json"
        run(["design", "--method", "prop42", "--out", prop])
        run(["design", "--method", "nr42", "--out", nr])
        o1, o2 = tmp_path / "r1.csv", tmp_path / "r2.csv"
        args = ["rate", "--codebooks", nr, prop, "-N", 8, "--snr-db", "0:10:5",
                "--trials", 60, "--seed", 3]
        run(args + ["--out", o1])
        run(args + ["--out", o2])
        assert o1.read_bytes() == o2.read_bytes()


class TestGainCdf:
    def test_duplicate_codebook_identical_columns(self, tmp_path):
        prop = tmp_path / "p.json"
        run(["design", "--method", "prop42", "--out", prop])
        out = tmp_path / "gain.csv"
        assert run(
            ["gain-cdf", "--codebooks", prop, prop, "-N", 4, "--k-factors", "0,inf",
             "--trials", 40, "--seed", 2, "--out", out]
        ) == 0
        rows = [line.split(",") for line in out.read_text().splitlines()[1:]]
        for row in rows:
            assert row[1] == row[2] and row[3] == row[4]


class TestPapr:
    def test_row_sparse_sweep_and_scatter(self, tmp_path):
        out = tmp_path / "papr.csv"
        scatter = tmp_path / "scatter.csv"
        assert run(
            ["papr", "--row-sparse", "8,4,1", "8,4,4", "--thetas", "1.91,-2.21,-1.71,0.636",
             "--waveform", "dft-s-ofdm", "--subcarriers", 128, "--fft", 128,
             "--oversample", 4, "--trials", 30, "--thresholds", "4:10:1",
             "--scatter", scatter, "--scatter-frames", 2, "--out", out, "--seed", 4]
        ) == 0
        lines = out.read_text().splitlines()
        assert lines[0] == "threshold_db,ccdf_rows_T8M4l1_dftsofdm,ccdf_rows_T8M4l4_dftsofdm"
        assert len(lines) == 8
        scatter_lines = scatter.read_text().splitlines()
        assert scatter_lines[0] == "re,im"
        assert len(scatter_lines) == 1 + 2 * 128

    def test_requires_some_scheme(self, tmp_path, capsys):
        assert run(["papr", "--out", tmp_path / "x.csv"]) != 0

    def test_ccdf_columns_nonincreasing(self, tmp_path):
        out = tmp_path / "papr.csv"
        run(
            ["papr", "--row-sparse", "4,2,2", "--waveform", "ofdm", "--subcarriers", 64,
             "--fft", 64, "--oversample", 2, "--trials", 40, "--thresholds", "2:12:0.5",
             "--out", out, "--seed", 5]
        )
        rows = [line.split(",") for line in out.read_text().splitlines()[1:]]
        probs = [float(r[1]) for r in rows]
        assert all(b <= a for a, b in zip(probs, probs[1:]))


class TestAudit:
    def test_json_report(self, tmp_path):
        out = tmp_path / "audit.json"
        assert run(["audit", "-T", 4, "-M", 2, "-N", 32, "--size", 22, "--out", out]) == 0
        doc = json.loads(out.read_text())
        assert doc["gram_mults"] == {"dense": 384, "sparse": 256}
        assert doc["real_variables"] == {"manopt": 176, "proposed2m": 16}

    def test_sweep_matches_formula(self, tmp_path):
        out = tmp_path / "sweep.csv"
        assert run(["audit", "-T", 4, "-M", 2, "--sweep", "4,64,1024", "--out", out]) == 0
        rows = [line.split(",") for line in out.read_text().splitlines()[1:]]
        for size_s, manopt_s, prop_s in rows:
            size = int(size_s)
            assert int(manopt_s) == 2 * size * 2 * (4 - 2)
            assert int(prop_s) == -(-size // 3) * 2

    def test_bad_method_errors(self):
        with pytest.raises(SystemExit):
            run(["design", "--method", "fancy"])
