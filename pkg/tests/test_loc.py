from __future__ import annotations

import zipfile

import pytest
from hypothesis import given, strategies as st

from techlev.exceptions import UnresolvedDependencyError
from techlev.loc import (
    JAVA,
    LanguageProfile,
    count_archive_files,
    count_file_loc,
    count_files,
    count_library_loc,
    count_text_loc,
    split_lines,
    sum_direct_dep_loc,
)
from techlev.model import parse_gav

from conftest import make_instance
from loc_oracle import oracle_loc


@pytest.mark.parametrize("text, expected", [
    ("int a; // trailing\n/* block\n   comment */ int b;\n", 2),
    ("/* a */ /* b */\n  \n// only\nx();\n", 1),
    ("a /* x */ b\n/*\n*/c\n", 2),
    ("", 0),
    ("\n\n   \n\t\n", 0),
    ("/* never closed\nint x;\n", 0),
    ("/* /* not nested */ x();\n", 1),
    ("/* outer /* inner */ still_code */\n", 1),
    ("// /* opener inside a line comment\nx();\n", 1),
    ("x();\r\ny();\rz();", 3),
    ("*/ stray closer\n", 1),
])
def test_count_examples(text, expected):
    assert count_text_loc(text) == expected
    assert oracle_loc(text) == expected


fragments = st.sampled_from(["/", "*", "//", "/*", "*/", "x", ";", " ", "\t", "\n", "\n", "\r\n", "{", "}"])
sources = st.lists(fragments, max_size=60).map("".join)


@given(sources)
def test_matches_oracle(text):
    assert count_text_loc(text) == oracle_loc(text)


@given(sources)
def test_never_exceeds_physical_lines(text):
    assert 0 <= count_text_loc(text) <= len(split_lines(text))


def _without_blocks(text):
    text = text.replace("\r", "")
    while "/*" in text:
        text = text.replace("/*", "")
    return text


@given(st.lists(sources, max_size=5))
def test_line_comment_only_files_are_additive(parts):
    parts = [_without_blocks(p) for p in parts]
    assert count_text_loc("\n".join(parts)) == sum(count_text_loc(p) for p in parts)


@given(sources)
def test_appending_comment_line_does_not_change_count(text):
    text = _without_blocks(text)
    assert count_text_loc(text + "\n// just a comment\n") == count_text_loc(text)


def test_custom_profile():
    py = LanguageProfile(code_extensions=(".py",), line_comment_prefixes=("#",), block_comment_delimiters=())
    assert count_text_loc("# c\nx = 1  # t\n\n", py) == 1
    assert py.is_code_file("a.PY") and not py.is_code_file("a.java")
    assert LanguageProfile.from_dict(py.to_dict()) == py


def test_profile_from_json(tmp_path):
    path = tmp_path / "p.json"
    path.write_text('{"code_extensions": [".c"], "line_comment_prefixes": ["//"], '
                    '"block_comment_delimiters": [["/*", "*/"]]}')
    prof = LanguageProfile.from_json(path)
    assert prof.is_code_file("x.c")
    assert count_text_loc("/* a */ b;\n", prof) == 1


def _tree(tmp_path):
    root = tmp_path / "src"
    (root / "a" / "b").mkdir(parents=True)
    (root / "a" / "One.java").write_text("class One {\n  // c\n}\n")
    (root / "a" / "b" / "Two.java").write_text("/*\n*/\nclass Two {}\n")
    (root / "notes.txt").write_text("not code\nat all\n")
    (root / "Bad.java").write_bytes(b"class Bad { \xff }\n")
    return root


def test_count_files_directory(tmp_path):
    root = _tree(tmp_path)
    counts = count_files(root)
    assert counts == {"Bad.java": 1, "a/One.java": 2, "a/b/Two.java": 1}
    assert count_library_loc(root) == 4
    assert count_files(root, jobs=4) == counts


def test_symlinks_skipped(tmp_path):
    root = _tree(tmp_path)
    try:
        (root / "Link.java").symlink_to(root / "a" / "One.java")
    except OSError:
        pytest.skip("symlinks unsupported")
    assert "Link.java" not in count_files(root)


def test_missing_directory(tmp_path):
    with pytest.raises(FileNotFoundError):
        count_files(tmp_path / "nope")


def test_archive_matches_directory(tmp_path):
    root = _tree(tmp_path)
    jar = tmp_path / "lib-1.0-sources.jar"
    with zipfile.ZipFile(jar, "w") as zf:
        for p in sorted(root.rglob("*")):
            if p.is_file():
                zf.write(p, p.relative_to(root).as_posix())
    assert count_archive_files(jar) == count_files(root)
    assert count_library_loc(jar) == count_library_loc(root)


def test_file_with_bad_bytes(tmp_path):
    p = tmp_path / "X.java"
    p.write_bytes(b"\xfe\xfe\n// c\nint x;\n")
    assert count_file_loc(p, JAVA) == 2


def test_sum_direct_dep_loc_third_party_only():
    inst = make_instance("org.x:app:1.0", deps=["org.x.core:core:1.0", "org.y:lib:2.0", "org.z:z:1.0", "org.y:lib:2.0"])
    index = {
        parse_gav("org.x.core:core:1.0"): make_instance("org.x.core:core:1.0", own_loc=500),
        parse_gav("org.y:lib:2.0"): make_instance("org.y:lib:2.0", own_loc=300, deps=["org.z:z:1.0"]),
        parse_gav("org.z:z:1.0"): make_instance("org.z:z:1.0", own_loc=70),
    }
    assert sum_direct_dep_loc(inst, index) == 370
    # z is reachable twice but counted once
    assert sum_direct_dep_loc(inst, index, transitive=True) == 370


def test_sum_transitive_closure():
    inst = make_instance("a:a:1", deps=["b:b:1"])
    index = {
        parse_gav("b:b:1"): make_instance("b:b:1", own_loc=10, deps=["c:c:1"]),
        parse_gav("c:c:1"): make_instance("c:c:1", own_loc=5),
    }
    assert sum_direct_dep_loc(inst, index) == 10
    assert sum_direct_dep_loc(inst, index, transitive=True) == 15


def test_sum_unresolved_lists_missing():
    inst = make_instance("a:a:1", deps=["b:b:1", "c:c:1"])
    with pytest.raises(UnresolvedDependencyError) as err:
        sum_direct_dep_loc(inst, {})
    assert err.value.missing == ["b:b:1", "c:c:1"]
