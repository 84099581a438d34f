import pytest

from catbench.registry import EvalConfig, RegistryError, register


def test_default_binary_functions(reg):
    assert reg.apply_binary("%", 7, 3) == 1
    assert reg.apply_binary("-", 1, 5) == 0  # truncated subtraction
    assert reg.apply_binary("max", 2, 9) == 9
    assert reg.apply_binary("/", 9, 2) == 4


def test_default_relations(reg):
    assert reg.lookup_rel3("gcdProp")(2, 2, 4)
    assert not reg.lookup_rel3("gcdProp")(3, 2, 4)
    assert reg.lookup_rel2("<")(1, 2)
    assert reg.lookup_rel2("=")(3, 3)


def test_division_by_zero_is_a_registry_error(reg):
    with pytest.raises(RegistryError):
        reg.apply_binary("/", 1, 0)
    with pytest.raises(RegistryError):
        reg.apply_binary("%", 1, 0)


def test_register_round_trip(reg):
    reg2 = register(reg, "unary", "double", lambda k: 2 * k)
    assert reg2.apply_unary("double", 3) == 6
    with pytest.raises(RegistryError):
        reg.lookup_unary("double")  # original untouched


def test_duplicate_registration_rejected(reg):
    with pytest.raises(RegistryError):
        register(reg, "binary", "+", lambda m, n: m + n)


def test_registered_ternary_relation_is_consulted(reg):
    reg2 = register(reg, "rel3", "sums", lambda a, b, c: a + b == c)
    assert reg2.lookup_rel3("sums")(1, 2, 3)


def test_non_natural_results_are_rejected(reg):
    reg2 = register(reg, "unary", "neg", lambda k: -k)
    with pytest.raises(RegistryError):
        reg2.apply_unary("neg", 1)


def test_registry_mappings_are_read_only(reg):
    with pytest.raises(TypeError):
        reg.binary["+"] = None  # type: ignore[index]


def test_eval_config_validation():
    with pytest.raises(ValueError):
        EvalConfig(fuel=0)
    with pytest.raises(ValueError):
        EvalConfig(mode="superscalar")  # type: ignore[arg-type]
