import json
import math
from fractions import Fraction

import pytest

from vfdielectric.quantity import (
    MASS,
    PERMITTIVITY,
    SPEED,
    Quantity,
)
from vfdielectric.species import LEPTON_PAIR, SpeciesSpec, builtin_species
from vfdielectric.vacuum import (
    METHOD_SELF_CONSISTENT,
    ConvergenceError,
    alpha_from_epsilon,
    closed_form_report,
    compare_to_reference,
    epsilon0_closed_form,
    epsilon0_self_consistent,
    inverse_alpha,
    lepton_contribution,
    quarkonium_contribution,
    report_from_dict,
    report_to_dict,
    speed_of_light,
)


@pytest.fixture(scope="module")
def ref_c(constants):
    return constants.get("ref_c")


@pytest.fixture(scope="module")
def ref_alpha(constants):
    return 1.0 / constants.get("ref_inv_alpha").value


@pytest.fixture(scope="module")
def trio(constants):
    return builtin_species(constants)


@pytest.fixture(scope="module")
def quark_pair(constants):
    full = builtin_species(constants, include_quarks=True)
    return {s.name: s for s in full[3:]}


def _e2_over_hbar_c(constants, c_value):
    e = constants.get("e").value
    return e * e / (constants.get("hbar").value * c_value)


# --- lepton contribution ------------------------------------------------------


def test_epair_contribution_reference_point(trio, constants, ref_alpha, ref_c):
    contribution = lepton_contribution(trio[0], constants, ref_alpha, ref_c)
    # independent closed coefficient: 8^3 alpha e^2/(hbar c)
    expected = 512.0 * ref_alpha * _e2_over_hbar_c(constants, ref_c.value)
    assert contribution.epsilon_term.dim == PERMITTIVITY
    assert contribution.epsilon_term.value == pytest.approx(expected, rel=1e-12)
    assert contribution.epsilon_term.value == pytest.approx(3.03e-12, rel=2e-3)
    assert contribution.in_alpha_units == pytest.approx(512.0 * ref_alpha, rel=1e-12)
    assert contribution.in_alpha_units == pytest.approx(3.736, rel=1e-3)


def test_mass_cancellation_across_leptons(trio, constants, ref_alpha, ref_c):
    terms = [
        lepton_contribution(s, constants, ref_alpha, ref_c).epsilon_term.value
        for s in trio
    ]
    assert terms[1] == pytest.approx(terms[0], rel=1e-12)
    assert terms[2] == pytest.approx(terms[0], rel=1e-12)


def test_mass_cancellation_under_synthetic_scaling(constants, ref_alpha, ref_c):
    base = builtin_species(constants)[0]
    reference = lepton_contribution(base, constants, ref_alpha, ref_c).epsilon_term.value
    for factor in (1e-2, 1.0, 1e3, 1e6):
        scaled = SpeciesSpec(
            name="synthetic_lepton",
            kind=LEPTON_PAIR,
            constituent_mass=Quantity(base.constituent_mass.value * factor, MASS),
            charge_fraction=Fraction(1),
        )
        term = lepton_contribution(scaled, constants, ref_alpha, ref_c).epsilon_term.value
        assert term == pytest.approx(reference, rel=1e-12)


def test_lepton_contribution_rejects_quarkonium(quark_pair, constants, ref_alpha, ref_c):
    with pytest.raises(ValueError):
        lepton_contribution(quark_pair["eta_c"], constants, ref_alpha, ref_c)


def test_contribution_invariant_alpha_units(trio, constants, ref_alpha, ref_c):
    contribution = lepton_contribution(trio[0], constants, ref_alpha, ref_c)
    reconstructed = contribution.in_alpha_units * _e2_over_hbar_c(constants, ref_c.value)
    assert contribution.epsilon_term.value == pytest.approx(reconstructed, rel=1e-12)


# --- quarkonium contribution -----------------------------------------------------


def test_etac_contribution_order_of_magnitude(quark_pair, constants, ref_c):
    contribution = quarkonium_contribution(quark_pair["eta_c"], constants, ref_c)
    coefficient = contribution.epsilon_term.value / _e2_over_hbar_c(constants, ref_c.value)
    assert 1.3e-3 / 1.5 <= coefficient <= 1.3e-3 * 1.5
    assert contribution.in_alpha_units == pytest.approx(coefficient, rel=1e-12)


def test_etab_contribution_max_width(quark_pair, constants, ref_c):
    contribution = quarkonium_contribution(
        quark_pair["eta_b"], constants, ref_c, width_choice="max"
    )
    coefficient = contribution.epsilon_term.value / _e2_over_hbar_c(constants, ref_c.value)
    assert 2.6e-5 / 1.5 <= coefficient <= 2.6e-5 * 1.5


def test_etab_width_choice_scales_linearly(quark_pair, constants, ref_c):
    by_max = quarkonium_contribution(quark_pair["eta_b"], constants, ref_c, "max")
    by_min = quarkonium_contribution(quark_pair["eta_b"], constants, ref_c, "min")
    assert by_min.epsilon_term.value / by_max.epsilon_term.value == pytest.approx(
        0.22 / 0.45, rel=1e-12
    )


def test_etac_small_against_lepton_total(trio, quark_pair, constants, ref_alpha, ref_c):
    lepton_total = sum(
        lepton_contribution(s, constants, ref_alpha, ref_c).epsilon_term.value
        for s in trio
    )
    etac = quarkonium_contribution(quark_pair["eta_c"], constants, ref_c)
    ratio = etac.epsilon_term.value / lepton_total
    assert ratio == pytest.approx(1e-4, rel=0.5)  # "about 1e-4 times smaller"


def test_quarkonium_contribution_rejects_lepton(trio, constants, ref_c):
    with pytest.raises(ValueError):
        quarkonium_contribution(trio[0], constants, ref_c)


# --- closed form ------------------------------------------------------------------


def test_closed_form_paper_value(constants):
    eps = epsilon0_closed_form(constants, n_species=3)
    assert eps.dim == PERMITTIVITY
    assert eps.value == pytest.approx(9.10e-12, rel=3e-3)


def test_closed_form_matches_six_mu0_over_pi_form(constants):
    eps = epsilon0_closed_form(constants, n_species=3)
    e = constants.get("e").value
    hbar = constants.get("hbar").value
    explicit = (6.0 * constants.get("mu0").value / math.pi) * (8.0 * e * e / hbar) ** 2
    assert eps.value == pytest.approx(explicit, rel=1e-14)


def test_closed_form_linear_in_species_count(constants):
    one = epsilon0_closed_form(constants, n_species=1)
    three = epsilon0_closed_form(constants, n_species=3)
    assert one.value == pytest.approx(three.value / 3.0, rel=1e-14)


def test_closed_form_needs_at_least_one_species(constants):
    with pytest.raises(ValueError):
        epsilon0_closed_form(constants, n_species=0)


# --- derived outputs ---------------------------------------------------------------


def test_speed_of_light_paper_value(constants):
    c = speed_of_light(epsilon0_closed_form(constants), constants)
    assert c.dim == SPEED
    assert c.value == pytest.approx(2.96e8, rel=2e-3)


def test_speed_of_light_reference_consistency(constants):
    c = speed_of_light(constants.get("ref_epsilon0"), constants)
    assert c.value == pytest.approx(constants.get("ref_c").value, rel=1e-9)


def test_speed_algebraic_identity(constants):
    # 1/sqrt(mu0 (6 mu0/pi)(8 e^2/hbar)^2) == sqrt(pi/6) hbar/(8 e^2 mu0)
    c = speed_of_light(epsilon0_closed_form(constants), constants)
    e = constants.get("e").value
    hbar = constants.get("hbar").value
    mu0 = constants.get("mu0").value
    explicit = math.sqrt(math.pi / 6.0) * hbar / (8.0 * e * e * mu0)
    assert c.value == pytest.approx(explicit, rel=1e-12)


def test_inverse_alpha_model_value(constants):
    eps = epsilon0_closed_form(constants)
    c = speed_of_light(eps, constants)
    model = inverse_alpha(eps, c, constants)
    assert model == pytest.approx(64.0 * math.sqrt(3.0 * math.pi / 2.0), rel=1e-12)
    assert model == pytest.approx(138.93, abs=0.01)


def test_inverse_alpha_from_reference_values(constants):
    value = inverse_alpha(
        constants.get("ref_epsilon0"), constants.get("ref_c"), constants
    )
    assert value == pytest.approx(137.036, abs=0.001)


# --- self-consistent solver -----------------------------------------------------


def test_lepton_only_fixed_point_equals_closed_form(trio, constants):
    report = epsilon0_self_consistent(trio, constants)
    closed = epsilon0_closed_form(constants, n_species=3)
    assert report.epsilon0_model.value == pytest.approx(closed.value, rel=1e-12)
    assert report.iterations <= 2
    assert report.method == METHOD_SELF_CONSISTENT


def test_quark_terms_shift_epsilon_by_1p2e_minus_4(constants):
    lepton_report = epsilon0_self_consistent(builtin_species(constants), constants)
    full_report = epsilon0_self_consistent(
        builtin_species(constants, include_quarks=True), constants
    )
    shift = (
        full_report.epsilon0_model.value - lepton_report.epsilon0_model.value
    ) / lepton_report.epsilon0_model.value

    # independent estimate: quark coefficients over the lepton total, evaluated
    # at the model's own alpha and c
    c_model = full_report.c_model
    quark_sum = sum(
        contribution.epsilon_term.value
        for contribution in full_report.contributions
        if contribution.species_name.startswith("eta_")
    )
    expected = quark_sum / (3.0 * 512.0 * alpha_from_epsilon(
        full_report.epsilon0_model, c_model, constants
    ) * _e2_over_hbar_c(constants, c_model.value))
    assert shift == pytest.approx(expected, rel=1e-3)
    assert shift == pytest.approx(1.2e-4, rel=0.1)


def test_self_consistent_converges_quickly_with_quarks(constants):
    report = epsilon0_self_consistent(
        builtin_species(constants, include_quarks=True), constants
    )
    assert report.iterations <= 5


def test_self_consistent_requires_a_lepton(quark_pair, constants):
    with pytest.raises(ValueError):
        epsilon0_self_consistent(tuple(quark_pair.values()), constants)


def test_self_consistent_tolerance_range(trio, constants):
    with pytest.raises(ValueError):
        epsilon0_self_consistent(trio, constants, tol=1e-16)


def test_self_consistent_nonconvergence_error(constants):
    with pytest.raises(ConvergenceError):
        epsilon0_self_consistent(
            builtin_species(constants, include_quarks=True), constants, max_iter=1
        )


def test_monotonicity_of_quark_additions(constants):
    # more polarizable species: eps0 strictly up, c strictly down, coupling
    # strictly up (1/alpha grows with sqrt(eps0))
    lepton_report = epsilon0_self_consistent(builtin_species(constants), constants)
    full_report = epsilon0_self_consistent(
        builtin_species(constants, include_quarks=True), constants
    )
    assert full_report.epsilon0_model.value > lepton_report.epsilon0_model.value
    assert full_report.c_model.value < lepton_report.c_model.value
    assert full_report.inv_alpha_model > lepton_report.inv_alpha_model


# --- reports -----------------------------------------------------------------------


def test_report_internal_invariants(constants):
    for report in (
        closed_form_report(constants),
        epsilon0_self_consistent(builtin_species(constants, include_quarks=True), constants),
    ):
        mu0 = constants.get("mu0").value
        expected_c = 1.0 / math.sqrt(mu0 * report.epsilon0_model.value)
        assert report.c_model.value == pytest.approx(expected_c, rel=1e-12)
        e = constants.get("e").value
        expected_inv_alpha = (
            4.0 * math.pi * report.epsilon0_model.value
            * constants.get("hbar").value * report.c_model.value / (e * e)
        )
        assert report.inv_alpha_model == pytest.approx(expected_inv_alpha, rel=1e-12)


def test_reference_deltas_match_paper(constants, trio):
    report = epsilon0_self_consistent(trio, constants)
    deltas = compare_to_reference(report, constants)
    assert deltas == report.reference_deltas
    assert deltas["epsilon0"] == pytest.approx(-2.8, abs=0.1)
    assert deltas["c"] == pytest.approx(1.3, abs=0.1)
    assert deltas["inv_alpha"] == pytest.approx(-1.4, abs=0.1)


def test_report_dict_round_trip(constants):
    report = epsilon0_self_consistent(
        builtin_species(constants, include_quarks=True), constants
    )
    payload = json.loads(json.dumps(report_to_dict(report, constants)))
    again = report_from_dict(payload)
    assert again.epsilon0_model == report.epsilon0_model
    assert again.c_model == report.c_model
    assert again.inv_alpha_model == report.inv_alpha_model
    assert again.method == report.method
    assert again.iterations == report.iterations
    assert again.reference_deltas == report.reference_deltas
    assert again.contributions == report.contributions


def test_closed_form_report_terms_sum_to_model(constants):
    report = closed_form_report(constants)
    total = sum(c.epsilon_term.value for c in report.contributions)
    assert total == pytest.approx(report.epsilon0_model.value, rel=1e-12)
