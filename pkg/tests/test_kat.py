"""Known-answer vector file: parsing, recomputation, and the frozen set."""

import pytest

from letterseal.kat import (
    KatVector,
    canonical_vectors,
    check_file,
    check_vectors,
    compute_output,
    format_vectors,
    parse_vectors,
    write_vectors,
)

from helpers import KAT_FILE


def test_parse_format_roundtrip_on_frozen_file():
    text = KAT_FILE.read_text()
    assert format_vectors(parse_vectors(text)) == text


def test_dash_means_empty_input():
    vecs = parse_vectors("sha256_empty - e3b0c442\n")
    assert vecs[0].inputs == (b"",)
    assert vecs[0].output == bytes.fromhex("e3b0c442")
    assert format_vectors(vecs).split()[1] == "-"


def test_comments_and_blank_lines_skipped():
    text = "# pinned outputs\n\nsha256_abc 616263 ba78\n   \n# end\n"
    vecs = parse_vectors(text)
    assert len(vecs) == 1
    assert vecs[0].name == "sha256_abc"


def test_parse_errors_carry_line_numbers():
    with pytest.raises(ValueError, match="line 1: need name"):
        parse_vectors("sha256_abc 616263\n")
    with pytest.raises(ValueError, match="line 3"):
        parse_vectors("\n\nsha256_abc 61zz63 ba78\n")


def test_unknown_vector_name_rejected():
    with pytest.raises(ValueError, match="no computer registered"):
        compute_output("md5_legacy", (b"",))


def test_canonical_vectors_match_frozen_file():
    assert format_vectors(canonical_vectors()) == KAT_FILE.read_text()


def test_check_file_all_green():
    results = check_file(KAT_FILE)
    assert len(results) == 12
    assert all(ok for _name, ok in results)


def test_corrupted_output_detected():
    vecs = parse_vectors(KAT_FILE.read_text())
    bad = bytearray(vecs[0].output)
    bad[0] ^= 1
    vecs[0] = KatVector(vecs[0].name, vecs[0].inputs, bytes(bad))
    results = dict(check_vectors(vecs))
    assert results[vecs[0].name] is False
    assert sum(not ok for ok in results.values()) == 1


def test_write_vectors_roundtrip(tmp_path):
    out = tmp_path / "vectors.txt"
    n = write_vectors(out)
    assert n == 12
    assert out.read_text() == KAT_FILE.read_text()
    assert all(ok for _n, ok in check_file(out))
