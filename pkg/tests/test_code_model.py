"""Parsing, entity extraction, comment detection, and corpus I/O."""

import io
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from stylodetect.code_model import (
    Generator,
    Language,
    SourceUnit,
    detect_comment_lines,
    extract_entities,
    is_parseable,
    load_corpus,
    parse,
    read_corpus,
    save_corpus,
    tokenize_unit,
    unit_from_dict,
    unit_to_dict,
    write_corpus,
)
from stylodetect.errors import DataError, ParseError
from synth import random_program


def unit(text, language=Language.PYTHON, generator=Generator.HUMAN, uid="u1"):
    origin = "" if generator is Generator.HUMAN else "h1"
    return SourceUnit(id=uid, language=language, generator=generator, origin_id=origin, text=text)


class TestParse:
    def test_python_function(self):
        tree = parse(unit("def f(x):\n    return x\n"))
        kinds = [n.kind for n in tree.walk()]
        assert tree.kind == "translation_unit"
        assert "function_definition" in kinds

    def test_c_function(self):
        tree = parse(unit("int f(int x) { return x; }\n", Language.C))
        kinds = [n.kind for n in tree.walk()]
        assert "function_definition" in kinds

    def test_java_class(self):
        tree = parse(unit("class A { static int f() { return 1; } }\n", Language.JAVA))
        kinds = [n.kind for n in tree.walk()]
        assert "class_declaration" in kinds
        assert "function_definition" in kinds

    def test_unbalanced_braces_raise(self):
        with pytest.raises(ParseError):
            parse(unit("int f() { return 1;\n", Language.C))

    def test_python_syntax_error_raises(self):
        with pytest.raises(ParseError):
            parse(unit("def f(:\n"))

    def test_unterminated_string_raises(self):
        with pytest.raises(ParseError):
            parse(unit('char *s = "abc;\n', Language.C))

    def test_is_parseable(self):
        assert is_parseable(unit("x = 1\n"))
        assert not is_parseable(unit("def f(:\n"))

    def test_spans_inside_file(self):
        rng = random.Random(0)
        for language in Language:
            for _ in range(5):
                u = unit(random_program(rng, language), language)
                tree = parse(u)
                n_lines = len(u.text.splitlines())
                for node in tree.walk():
                    start, end, _, _ = node.span
                    assert 1 <= start <= end <= n_lines

    def test_child_spans_contained(self):
        rng = random.Random(1)
        for language in Language:
            u = unit(random_program(rng, language), language)
            for node in parse(u).walk():
                for child in node.children:
                    assert node.span[0] <= child.span[0]
                    assert child.span[1] <= node.span[1]


class TestEntities:
    def test_python_entities(self):
        text = "MAX = 10\n\nclass A:\n    def go(self):\n        k = 1\n        return k\n"
        u = unit(text)
        tables = extract_entities(parse(u), u)
        assert [name for name, _, _ in tables.functions] == ["go"]
        assert tables.classes == ["A"]
        assert tables.constants == ["MAX"]
        assert "k" in tables.variables

    def test_c_entities(self):
        text = "#define MAX 10\nint add(int a, int b) {\n    int sum = a + b;\n    return sum;\n}\n"
        u = unit(text, Language.C)
        tables = extract_entities(parse(u), u)
        assert [name for name, _, _ in tables.functions] == ["add"]
        assert tables.constants == ["MAX"]
        assert set(tables.variables) >= {"a", "b", "sum"}

    def test_java_entities(self):
        text = (
            "class Box {\n"
            "    static final int LIMIT = 5;\n"
            "    int get(int x) {\n"
            "        int y = x + 1;\n"
            "        return y;\n"
            "    }\n"
            "}\n"
        )
        u = unit(text, Language.JAVA)
        tables = extract_entities(parse(u), u)
        assert tables.classes == ["Box"]
        assert tables.constants == ["LIMIT"]
        assert [name for name, _, _ in tables.functions] == ["get"]

    def test_function_spans_cover_bodies(self):
        rng = random.Random(2)
        for language in Language:
            u = unit(random_program(rng, language), language)
            tables = extract_entities(parse(u), u)
            n_lines = len(u.text.splitlines())
            for _, start, end in tables.functions:
                assert 1 <= start <= end <= n_lines

    def test_nesting_depth_example(self):
        # function body at depth 1, a loop inside at 2, an if inside at 3.
        text = (
            "def f():\n"
            "    for i in range(3):\n"
            "        if i:\n"
            "            pass\n"
        )
        u = unit(text)
        tables = extract_entities(parse(u), u)
        depths = sorted(d for _, d in tables.block_nodes)
        assert depths == [1, 2, 3]

    def test_else_clause_same_depth(self):
        text = "def f(x):\n    if x:\n        return 1\n    else:\n        return 2\n"
        u = unit(text)
        tables = extract_entities(parse(u), u)
        by_kind = dict((k, d) for k, d in tables.block_nodes)
        assert by_kind["if_statement"] == by_kind["else_clause"]


class TestComments:
    def test_python_hash_and_docstring(self):
        u = unit('"""doc\nstring"""\nx = 1  # trailing\n')
        cm = detect_comment_lines(u)
        assert cm.total_lines == 3
        assert cm.comment_lines == 3

    def test_c_line_and_block(self):
        u = unit("// one\nint x; /* two\nthree */\nint y;\n", Language.C)
        cm = detect_comment_lines(u)
        assert cm.total_lines == 4
        assert cm.comment_lines == 3

    def test_comment_in_string_not_counted(self):
        u = unit('s = "# not a comment"\n')
        assert detect_comment_lines(u).comment_lines == 0

    def test_tolerant_on_broken_code(self):
        # Comment detection must not fail even on unparseable files.
        u = unit("int f() { // half\n", Language.C)
        assert detect_comment_lines(u).comment_lines == 1


class TestTokenize:
    def test_python_tokens(self):
        tokens = tokenize_unit(unit("x = f(1) + 2  # note\n"))
        assert "x" in tokens and "f" in tokens
        assert "# note" not in tokens

    def test_c_tokens_exclude_comments(self):
        tokens = tokenize_unit(unit("int x = 1; // note\n", Language.C))
        assert "int" in tokens and "x" in tokens
        assert all("note" not in t for t in tokens)


class TestCorpusIO:
    def test_roundtrip(self, tmp_path):
        units = [
            unit("x = 1\n", uid="a"),
            unit("y = 2\n", generator=Generator.CHATGPT, uid="b"),
        ]
        path = tmp_path / "c.jsonl"
        save_corpus(units, str(path))
        back = load_corpus(str(path))
        assert back == units

    def test_stream_roundtrip(self):
        units = [unit("x = 1\n", uid="a")]
        buf = io.StringIO()
        write_corpus(units, buf)
        buf.seek(0)
        assert list(read_corpus(buf)) == units

    def test_malformed_json_raises(self):
        with pytest.raises(DataError):
            list(read_corpus(io.StringIO("not json\n")))

    def test_missing_field_raises(self):
        with pytest.raises(DataError):
            list(read_corpus(io.StringIO('{"id": "a"}\n')))

    def test_dict_roundtrip(self):
        u = unit("x = 1\n")
        assert unit_from_dict(unit_to_dict(u)) == u

    def test_human_with_origin_rejected(self):
        with pytest.raises(DataError):
            SourceUnit(
                id="a",
                language=Language.PYTHON,
                generator=Generator.HUMAN,
                origin_id="other",
                text="x = 1\n",
            )


@settings(max_examples=60, deadline=None)
@given(st.integers(min_value=0, max_value=10**9), st.sampled_from(list(Language)))
def test_fuzz_generated_programs_parse(seed, language):
    rng = random.Random(seed)
    u = unit(random_program(rng, language), language)
    tree = parse(u)
    assert tree.node_count() >= 1
    tables = extract_entities(tree, u)
    assert len(tables.functions) >= 1
