import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from overdet import catalog, randgen
from overdet.sysparse import MAX_EXPONENT, ParseError, ShiftViolation, SystemSpec, emit, parse

from _util import P


def test_cr_system():
    spec = parse("vars 4; unknowns 1; eq d1 + i*d2; eq d3 + i*d4;")
    assert (spec.nvars, spec.nunknowns, spec.neqs) == (4, 1, 2)
    assert spec.entries[1][0] == P("d3 + i*d4", 4)
    assert spec.sigma is None and spec.rho is None


def test_laplace():
    spec = parse("vars 2; unknowns 1; eq d1^2 + d2^2;")
    assert spec.neqs == 1 and spec.entries[0][0].total_degree() == 2


def test_example2_instance():
    spec = parse("vars 3; unknowns 1; eq d2^2 + d3^2; eq d1;")
    assert spec.neqs == 2
    assert spec.entries[1][0] == P("d1", 3)


def test_multi_unknown_rows_and_comments():
    text = """
    # a 2x2 system
    vars 2; unknowns 2;
    eq d1, -d2;   # first row
    eq d2, d1;
    """
    spec = parse(text)
    assert spec.entries[0][1] == P("-d2", 2)


def test_shifts_clause():
    spec = parse("vars 2; unknowns 1; shifts sigma = [2]; rho = [0]; eq d1^2 + d2;")
    assert spec.sigma == (2,) and spec.rho == (0,)


def test_negative_shifts_allowed():
    spec = parse("vars 1; unknowns 1; shifts sigma = [0]; rho = [-1]; eq d1;")
    assert spec.rho == (-1,)


def test_arithmetic_in_expressions():
    spec = parse("vars 2; unknowns 1; eq (d1 + i*d2)*(d1 - i*d2) - 3/4*d1^0;")
    assert spec.entries[0][0] == P("d1^2 + d2^2 - 3/4", 2)


def test_syntax_error_location():
    with pytest.raises(ParseError) as info:
        parse("vars 2;\nunknowns 1;\neq d1 + ;")
    assert info.value.line == 3
    assert info.value.col is not None


def test_entry_count_mismatch():
    with pytest.raises(ParseError, match="entries"):
        parse("vars 2; unknowns 2; eq d1;")


def test_variable_out_of_range():
    with pytest.raises(ParseError):
        parse("vars 2; unknowns 1; eq d3;")


def test_shift_violation_names_entry():
    with pytest.raises(ShiftViolation) as info:
        parse("vars 2; unknowns 2; shifts sigma = [1]; rho = [0, 0]; eq d1, d2^2;")
    assert info.value.entry == (0, 1)


def test_shift_length_mismatch():
    with pytest.raises(ParseError):
        parse("vars 2; unknowns 1; shifts sigma = [1, 1]; eq d1;")


def test_missing_header_statements():
    with pytest.raises(ParseError):
        parse("eq d1;")
    with pytest.raises(ParseError):
        parse("vars 2; unknowns 1;")


def test_exponent_bound():
    with pytest.raises(ParseError):
        parse(f"vars 1; unknowns 1; eq d1^{MAX_EXPONENT + 1};")


def test_division_by_zero_is_parse_error():
    with pytest.raises(ParseError):
        parse("vars 1; unknowns 1; eq d1/0;")


def test_emit_shift_clause_preserved():
    spec = parse("vars 4; unknowns 1; shifts sigma = [1,1]; rho = [0]; eq d1 + i*d2; eq d3 + i*d4;")
    text = emit(spec)
    assert "shifts sigma = [1,1]; rho = [0];" in text
    assert parse(text) == spec


def test_emit_zero_entry():
    spec = parse("vars 2; unknowns 2; eq d1, 0;")
    assert "eq d1, 0;" in emit(spec)
    assert parse(emit(spec)) == spec


def test_catalog_round_trip():
    for name in catalog.names():
        spec = catalog.system(name)
        assert parse(emit(spec)) == spec
        assert spec.name == name


def test_random_round_trip():
    rng = np.random.default_rng(2)
    for k in range(200):
        spec = randgen.system_spec(rng, with_shifts=k % 2 == 0)
        assert parse(emit(spec)) == spec


def test_spec_validation_direct():
    with pytest.raises(ParseError):
        SystemSpec(2, 1, ((P("d1", 3),),))
    with pytest.raises(ParseError):
        SystemSpec(2, 1, ())


def test_fuzz_bytes_never_crash():
    rng = np.random.default_rng(0)
    alphabet = list("vars unknowns eq shifts sigma rho name d1 d2 i 0123456789+-*/^(),;=[]#\"\n\t ")
    for _ in range(2000):
        length = int(rng.integers(0, 60))
        text = "".join(alphabet[int(rng.integers(0, len(alphabet)))] for _ in range(length))
        try:
            parse(text)
        except ParseError:
            pass


@settings(max_examples=300, deadline=None)
@given(st.text(max_size=80))
def test_fuzz_unicode_never_crash(text):
    try:
        parse(text)
    except ParseError:
        pass


@settings(max_examples=200, deadline=None)
@given(st.binary(max_size=80))
def test_fuzz_decoded_bytes_never_crash(data):
    try:
        parse(data.decode("utf-8", errors="replace"))
    except ParseError:
        pass
