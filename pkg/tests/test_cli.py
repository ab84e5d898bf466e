import json
from itertools import product as iproduct

import pytest

from chancodes.cli import main

HAMMING = [
    "0000000", "1000110", "0100101", "0010011", "0001111",
    "1100011", "1010101", "1001001", "0110110", "0101010",
    "0011100", "1110000", "1101100", "1011010", "0111001", "1111111",
]


@pytest.fixture
def hamming_file(tmp_path):
    path = tmp_path / "hamming.txt"
    path.write_text("\n".join(HAMMING) + "\n")
    return str(path)


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


class TestGen:
    def test_basic_generation(self, capsys, tmp_path):
        out_file = tmp_path / "report.txt"
        code, _, _ = run(
            capsys, "gen", "--channel", "del1", "--len", "8", "--n", "10",
            "--seed", "7", "-o", str(out_file),
        )
        assert code == 0
        text = out_file.read_text()
        assert "channel: del1" in text
        assert text.count("\n") > 12

    def test_deterministic_output(self, capsys):
        args = ("gen", "--channel", "sub:2", "--len", "6", "--n", "8",
                "--seed", "3")
        code, out1, _ = run(capsys, *args)
        code2, out2, _ = run(capsys, *args)
        assert code == code2 == 0
        assert out1 == out2

    def test_json_format(self, capsys):
        code, out, _ = run(
            capsys, "gen", "--channel", "sub:1", "--len", "4", "--n", "2",
            "--seed", "5", "--format", "json",
        )
        assert code == 0
        payload = json.loads(out)
        assert payload["channel"] == "sub:1"
        assert len(payload["words"]) == 2

    def test_multi_channel_union(self, capsys):
        code, out, _ = run(
            capsys, "gen", "--channel", "del1", "--channel", "sub:2",
            "--len", "8", "--n", "10", "--seed", "2", "--format", "json",
        )
        assert code == 0
        payload = json.loads(out)
        assert payload["channel"] == "del1|sub:2"
        # the produced code must detect both channels
        from chancodes import (
            BINARY, detection_witness, make_del1_insend, make_sub,
            trellis_from_words,
        )

        t = trellis_from_words(payload["words"], BINARY)
        assert not detection_witness(t, make_del1_insend())
        assert not detection_witness(t, make_sub(2))

    def test_overlap_free_universe_makes_solid_codes(self, capsys):
        code, out, _ = run(
            capsys, "gen", "--channel", "ov", "--universe", "of",
            "--len", "8", "--n", "100", "--seed", "9", "--format", "json",
        )
        assert code == 0
        payload = json.loads(out)
        from chancodes import is_solid_code

        assert payload["exhausted"]
        assert is_solid_code(payload["words"])

    def test_universe_from_trellis_file(self, capsys, tmp_path):
        from chancodes import BINARY, suffix_universe

        universe_file = tmp_path / "ends1.aut"
        universe_file.write_text(suffix_universe(BINARY, 5, "1").to_text())
        code, out, _ = run(
            capsys, "gen", "--channel", "sub:1", "--len", "5", "--n", "30",
            "--universe", str(universe_file), "--seed", "4", "--format", "json",
        )
        assert code == 0
        assert all(w.endswith("1") for w in json.loads(out)["words"])

    def test_universe_and_end_combine(self, capsys):
        code, out, _ = run(
            capsys, "gen", "--channel", "ov", "--universe", "of",
            "--end", "1", "--len", "6", "--n", "50", "--seed", "2",
            "--format", "json",
        )
        assert code == 0
        payload = json.loads(out)
        from chancodes import is_overlap_free

        for w in payload["words"]:
            assert w.endswith("1") and is_overlap_free(w)

    def test_non_detecting_seed_code_exits_2(self, capsys, tmp_path):
        bad = tmp_path / "bad.txt"
        bad.write_text("0000\n0001\n")
        code, _, err = run(
            capsys, "gen", "--channel", "sub:1", "--n", "5",
            "--seed-code", str(bad), "--seed", "1",
        )
        assert code == 2
        assert "seed code" in err

    def test_missing_channel_file_exits_1(self, capsys):
        code, _, err = run(
            capsys, "gen", "--channel", "nosuch.t", "--len", "4", "--n", "1",
        )
        assert code == 1

    def test_seed_env_var_default(self, capsys, monkeypatch):
        monkeypatch.setenv("CHANCODES_SEED", "99")
        args = ("gen", "--channel", "sub:1", "--len", "5", "--n", "4")
        code, out_env, _ = run(capsys, *args)
        assert code == 0
        assert "seed: 99" in out_env
        code, out_explicit, _ = run(capsys, *args, "--seed", "99")
        assert out_explicit == out_env


class TestCheck:
    def test_hamming_sub2_ok(self, capsys, hamming_file):
        code, out, _ = run(capsys, "check", "--channel", "sub:2", hamming_file)
        assert code == 0
        assert out.strip() == "NONE"

    def test_violation_exits_3(self, capsys, tmp_path):
        f = tmp_path / "code.txt"
        f.write_text("0100\n1001\n")
        code, out, _ = run(capsys, "check", "--channel", "ov", str(f))
        assert code == 3
        assert out.startswith("DETECT-VIOLATION")
        assert {"0100", "1001"} == set(out.split()[1:3])

    def test_empty_code_vacuous(self, capsys, tmp_path):
        f = tmp_path / "empty.txt"
        f.write_text("")
        code, out, _ = run(
            capsys, "check", "--channel", "sub:1", str(f), "--len", "4"
        )
        assert code == 0
        assert out.strip() == "NONE"

    def test_correct_check(self, capsys, tmp_path, hamming_file):
        code, out, _ = run(
            capsys, "correct-check", "--channel", "sub:1", hamming_file
        )
        assert code == 0
        f = tmp_path / "pair.txt"
        f.write_text("000\n011\n")
        code, out, _ = run(capsys, "correct-check", "--channel", "sub:1", str(f))
        assert code == 3
        assert out.startswith("CORRECT-VIOLATION")
        assert "via" in out

    def test_bad_code_file_exits_1(self, capsys, tmp_path):
        f = tmp_path / "mixed.txt"
        f.write_text("0\n00\n")
        code, _, err = run(capsys, "check", "--channel", "sub:1", str(f))
        assert code == 1
        assert "mixed" in err


class TestMaximalAndIndex:
    def test_maximal_systematic_code(self, capsys, tmp_path):
        f = tmp_path / "sys.txt"
        words = ["".join(b) + "01" for b in iproduct("01", repeat=6)]
        f.write_text("\n".join(words) + "\n")
        code, out, _ = run(capsys, "maximal", "--channel", "del1", str(f))
        assert code == 0
        assert out.strip() == "MAXIMAL"
        code, out, _ = run(capsys, "index", "--channel", "del1", str(f))
        assert code == 0
        assert out.strip() == "1 (1.0)"

    def test_addable_word_and_index(self, capsys, tmp_path):
        f = tmp_path / "single.txt"
        f.write_text("0000\n")
        code, out, _ = run(capsys, "maximal", "--channel", "sub:1", str(f))
        assert code == 0
        assert out.startswith("ADDABLE")
        code, out, _ = run(capsys, "index", "--channel", "sub:1", str(f))
        assert code == 0
        assert out.strip() == "5/16 (0.3125)"

    def test_non_detecting_input_exits_2(self, capsys, tmp_path):
        f = tmp_path / "bad.txt"
        f.write_text("0000\n0001\n")
        for cmd in ("maximal", "index"):
            code, _, err = run(capsys, cmd, "--channel", "sub:1", str(f))
            assert code == 2

    def test_maximal_with_restricted_universe(self, capsys, tmp_path):
        f = tmp_path / "solid.txt"
        f.write_text("00011\n00101\n")
        code, out, _ = run(
            capsys, "maximal", "--channel", "ov", "--universe", "of", str(f)
        )
        assert code == 0
        assert out.startswith("ADDABLE") or out.strip() == "MAXIMAL"
        if out.startswith("ADDABLE"):
            from chancodes import is_overlap_free, is_solid_code

            word = out.split()[1]
            assert is_overlap_free(word)
            assert is_solid_code(["00011", "00101", word])


class TestExperiment:
    def test_deterministic_cell(self, capsys):
        code, out, _ = run(
            capsys, "experiment", "--channel", "del1", "--len", "8",
            "--n", "100", "--end", "01", "--reps", "3", "--seed", "11",
        )
        assert code == 0
        assert "min=64 median=64 max=64" in out

    def test_multiple_channels_report_lines(self, capsys):
        code, out, _ = run(
            capsys, "experiment", "--channel", "sub:2", "--channel", "id:2",
            "--len", "6", "--n", "50", "--reps", "3", "--seed", "5",
        )
        assert code == 0
        lines = out.strip().splitlines()
        assert len(lines) == 2
        assert lines[0].startswith("channel=sub:2")
        assert lines[1].startswith("channel=id:2")

    def test_caps_enforced(self, capsys):
        code, _, err = run(
            capsys, "experiment", "--channel", "sub:1", "--len", "20",
            "--n", "10", "--reps", "1",
        )
        assert code == 1
        assert "cap" in err

    def test_reps_deterministic_vs_seed(self, capsys):
        args = ("experiment", "--channel", "sub:1", "--len", "5", "--n", "20",
                "--reps", "4", "--seed", "13")
        _, out1, _ = run(capsys, *args)
        _, out2, _ = run(capsys, *args)
        assert out1 == out2

    def test_parallel_workers_match_sequential(self, capsys):
        base = ("experiment", "--channel", "sub:1", "--len", "5", "--n", "20",
                "--reps", "4", "--seed", "13")
        _, sequential, _ = run(capsys, *base)
        _, parallel, _ = run(capsys, *base, "--workers", "2")
        assert parallel == sequential


class TestChannelCommand:
    def test_list(self, capsys):
        code, out, _ = run(capsys, "channel", "list")
        assert code == 0
        for name in ("sub:k", "del1", "ov"):
            assert name in out

    def test_show_round_trips(self, capsys, tmp_path):
        code, out, _ = run(capsys, "channel", "show", "del1")
        assert code == 0
        assert out.startswith("@Transducer 0 2 * 0")
        # a shown channel is loadable back as a file
        f = tmp_path / "del1.t"
        f.write_text(out)
        code, out2, _ = run(capsys, "channel", "show", str(f))
        assert code == 0
        assert out2 == out

    def test_unknown_channel(self, capsys):
        code, _, err = run(capsys, "channel", "show", "warp:9")
        assert code == 1
        assert "unknown channel" in err
