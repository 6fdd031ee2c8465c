import numpy as np
import pytest

from app.exceptions import CyclicGroup, InvalidPrime, NotPrime, SamePrime, ShapeError, TooLargeToEnumerate, WrongProvenance
from app.models import Provenance
from app.services.construction import (
    coset_fixed_basis,
    custom_action,
    fixed_space_lower_bound,
    is_prime_power,
    power_table,
    prime_power_decomposition,
    smallest_prime_power_1modp,
    thm1_action,
    thm2_action,
    trivial_action,
    witness_fixed_vector,
)
from app.services.finite_field import MatrixGF
from app.services.pgroup import catalog


@pytest.mark.parametrize(
    "p,q",
    [(2, 3), (3, 4), (5, 11), (7, 8), (11, 23), (13, 27), (17, 103), (19, 191), (23, 47), (29, 59)],
)
def test_smallest_prime_power_1modp(p, q):
    assert smallest_prime_power_1modp(p) == q


def test_smallest_prime_power_rejects_composite():
    with pytest.raises(InvalidPrime):
        smallest_prime_power_1modp(9)


def test_prime_power_helpers():
    assert is_prime_power(27)
    assert not is_prime_power(12)
    assert not is_prime_power(1)
    assert prime_power_decomposition(9) == (3, 2)
    with pytest.raises(NotPrime):
        prime_power_decomposition(12)


def test_power_table_single_row():
    rows = power_table(2)
    assert len(rows) == 1
    assert (rows[0].p, rows[0].q, rows[0].value, rows[0].prime_form) == (2, 3, 27, "3^3")


def test_power_table_prime_forms():
    forms = {row.p: row.prime_form for row in power_table(29)}
    assert len(forms) == 10
    assert forms[3] == "2^8"
    assert forms[7] == "2^24"
    assert forms[13] == "3^42"
    assert forms[17] == "103^18"


def test_thm1_action_shape(c2sq):
    action = thm1_action(c2sq, 3)
    assert action.dim == 3
    assert action.module_order == 27
    assert action.provenance == Provenance.THM1
    assert action.fixed_space_of_group().dimension == 0
    assert action.expected_cover_dimension() == 1


def test_thm1_fixed_space_of_involutions(c2sq):
    action = thm1_action(c2sq, 5)
    for x in range(1, 4):
        assert action.fixed_space(x).dimension == 1
        assert fixed_space_lower_bound(action, x) == 1


def test_thm1_rejects_composite_q(c2sq):
    with pytest.raises(NotPrime):
        thm1_action(c2sq, 4)


def test_thm1_rejects_same_prime(c2sq):
    with pytest.raises(SamePrime):
        thm1_action(c2sq, 2)


def test_thm1_rejects_cyclic():
    with pytest.raises(CyclicGroup):
        thm1_action(catalog("C4"), 3)


def test_thm1_group_order_limit(config):
    limited = config.model_copy(update={"thm1_max_group_order": 4})
    with pytest.raises(TooLargeToEnumerate):
        thm1_action(catalog("D8"), 3, limited)


def test_witness_fixed_vector(c2sq):
    action = thm1_action(c2sq, 3)
    for x in range(1, 4):
        w = witness_fixed_vector(action, x)
        assert w.any()
        assert np.array_equal(action.apply(x, w), w)
        assert action.fixed_space(x).contains(w)


def test_coset_fixed_basis_spans_lower_bound():
    action = thm1_action(catalog("D8"), 3)
    for x in range(1, 8):
        basis = coset_fixed_basis(action, x)
        assert basis.shape[0] == 8 // int(action.group.element_orders[x])
        assert np.array_equal(action.apply(x, basis), basis)
        assert MatrixGF(action.field, basis).rank() == fixed_space_lower_bound(action, x)


def test_thm1_specific_helpers_reject_thm2(c2sq):
    action = thm2_action(c2sq)
    with pytest.raises(WrongProvenance):
        witness_fixed_vector(action, 1)


@pytest.mark.parametrize("name,q,dim,degree", [("C2^2", 3, 3, 1), ("Q8", 3, 3, 1), ("C3^2", 4, 8, 2), ("Heis3", 4, 8, 2)])
def test_thm2_action(name, q, dim, degree):
    action = thm2_action(catalog(name))
    assert action.params["q"] == q
    assert action.params["degree"] == degree
    assert action.dim == dim
    assert action.fixed_space_of_group().dimension == 0
    for sub in action.cover:
        assert action.fixed_space_of(sub.members).dimension == degree


def test_thm2_rejects_cyclic():
    with pytest.raises(CyclicGroup):
        thm2_action(catalog("C9"))


def test_custom_action_must_be_homomorphism():
    matrices = [[[1]], [[2]], [[2]], [[2]]]
    with pytest.raises(ShapeError):
        custom_action(catalog("C2^2"), 3, matrices)


def test_custom_action_shape():
    with pytest.raises(ShapeError):
        custom_action(catalog("C2"), 3, [[[1]]])


def test_trivial_action(c2sq):
    action = trivial_action(c2sq, 3, 2)
    assert action.provenance == Provenance.CUSTOM
    assert action.fixed_space_of_group().dimension == 2
    assert action.expected_cover_dimension() is None
