"""
Tests for qcolor.utils module
"""

import json
from unittest.mock import patch

from qcolor.utils import canonical_json, dumps, format_table, purge, sha256_hex, write_document


class TestSerialization:
    """Test JSON helpers"""

    def test_dumps(self):
        text = dumps({"ratio": "3/2", "node": "½"})
        assert text.endswith("}\n")
        assert "½" in text
        assert json.loads(text) == {"ratio": "3/2", "node": "½"}

    def test_canonical_json(self):
        """Test that key order does not change the text"""
        assert canonical_json({"b": 1, "a": [1, 2]}) == '{"a":[1,2],"b":1}'
        assert canonical_json({"a": [1, 2], "b": 1}) == canonical_json({"b": 1, "a": [1, 2]})

    def test_sha256_hex(self):
        assert sha256_hex("") == "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855"


class TestWriteDocument:
    """Test write_document function"""

    def test_stdout(self, capsys):
        write_document("hello\n")
        assert capsys.readouterr().out == "hello\n"

    def test_file_with_parents(self, temp_project_dir, capsys):
        target = temp_project_dir / "out" / "nested" / "proof.tex"

        write_document("\\begin{tabular}\n", target)

        assert target.read_text(encoding="utf-8") == "\\begin{tabular}\n"
        assert capsys.readouterr().out == ""


class TestFormatTable:
    """Test format_table function"""

    def test_alignment(self):
        table = format_table(["ratio", "witness"], [["2", "(2,1,1)"], ["3/2", "(3/2,1,1)"]])
        assert table == (
            "ratio  witness\n"
            "-----  ---------\n"
            "2      (2,1,1)\n"
            "3/2    (3/2,1,1)\n"
        )

    def test_headers_only(self):
        assert format_table(["a", "bb"], []) == "a  bb\n-  --\n"


class TestPurge:
    """Test purge function"""

    def test_purge_files_non_recursive(self, temp_project_dir):
        """Test purging files non-recursively"""
        (temp_project_dir / "entry.tmp").write_text("partial")
        (temp_project_dir / "entry.json").write_text("{}")

        subdir = temp_project_dir / "subdir"
        subdir.mkdir()
        (subdir / "nested.tmp").write_text("nested partial")

        assert purge(temp_project_dir, ["*.tmp"]) == 1

        assert not (temp_project_dir / "entry.tmp").exists()
        assert (temp_project_dir / "entry.json").exists()
        assert (subdir / "nested.tmp").exists()

    def test_purge_files_recursive(self, temp_project_dir):
        """Test purging files recursively"""
        (temp_project_dir / "entry.tmp").write_text("partial")
        subdir = temp_project_dir / "subdir"
        subdir.mkdir()
        (subdir / "nested.tmp").write_text("nested partial")

        assert purge(temp_project_dir, ["*.tmp"], recursive=True) == 2

        assert not (temp_project_dir / "entry.tmp").exists()
        assert not (subdir / "nested.tmp").exists()

    def test_purge_directories(self, temp_project_dir):
        """Test purging two-character shard directories"""
        shard = temp_project_dir / "ab"
        shard.mkdir()
        (shard / "entry.json").write_text("{}")
        (temp_project_dir / "keep").mkdir()

        assert purge(temp_project_dir, ["??"]) == 1

        assert not shard.exists()
        assert (temp_project_dir / "keep").exists()

    def test_purge_no_matches(self, temp_project_dir):
        (temp_project_dir / "entry.json").write_text("{}")
        assert purge(temp_project_dir, ["*.tmp"]) == 0
        assert (temp_project_dir / "entry.json").exists()

    def test_purge_missing_directory(self, temp_project_dir):
        assert purge(temp_project_dir / "missing", ["*"]) == 0

    def test_purge_permission_error(self, temp_project_dir, caplog):
        """Test that removal failures are logged and skipped"""
        (temp_project_dir / "entry.tmp").write_text("partial")

        with patch("pathlib.Path.unlink", side_effect=PermissionError("Permission denied")):
            assert purge(temp_project_dir, ["*.tmp"]) == 0

        assert "Could not remove" in caplog.text
