"""
Tests for PredictorService
"""

import pytest
from pathlib import Path

# Add app directory to path for imports
import sys
app_dir = Path(__file__).parent.parent / "app"
sys.path.insert(0, str(app_dir))

from models.distribution import ProductionDistribution, TupleDistribution, uniform_tuple_distribution
from models.exceptions import AllEmptyError, BeyondHorizonError, DistributionError, ForeignTupleError
from models.prediction import EmptyProductionMode
from models.rule_set import Alphabet, RuleSet
from services.catalog_service import CatalogService
from services.config_service import AppSettings, ConfigService
from services.predictor_service import (
    PredictorService, conditional_tuple_probability, expected_growth, expected_production_length,
    next_tuple_distribution, predict_epochs, predict_length_at_step, prefix_probability,
    production_distribution, project_length, round_half_up, selection_distribution,
    symbol_densities,
)

AB = Alphabet(glyphs="ab")
WORKED = ProductionDistribution(mass={"bbb": 0.25, "ab": 0.25, "bb": 0.25, "a": 0.25})

# name -> (a density, growth per step, length) for epochs 0..6, reference length 100
REFERENCE_TABLES = {
    "terminating": (
        [0.5, 0.5, 0.467, 0.455, 0.450, 0.449, 0.448],
        [0.0, -0.125, -0.167, -0.181, -0.186, -0.188, -0.189],
        [100, 100, 93.75, 85.92, 78.15, 70.88, 64.22],
    ),
    "saturating": (
        [0.5, 0.333, 0.120, 0.054, 0.026, 0.013, 0.006],
        [0.25, 0.083, 0.037, 0.017, 0.008, 0.004, 0.002],
        [100, 112.5, 117.17, 119.34, 120.35, 120.83, 121.07],
    ),
    "decelerating": (
        [0.5, 0.273, 0.185, 0.129, 0.095, 0.071, 0.054],
        [0.75, 0.455, 0.296, 0.210, 0.153, 0.115, 0.088],
        [100, 137.5, 168.78, 193.76, 214.11, 230.49, 243.74],
    ),
    "linear": (
        [0.5, 0.375, 0.389, 0.4, 0.398, 0.397, 0.397],
        [0.0, 0.25, 0.222, 0.2, 0.205, 0.206, 0.206],
        [100, 100, 112.5, 124.99, 137.49, 151.58, 167.19],
    ),
    "vanishing": (
        [0.5, 0.667, 0.767, 0.863, 0.929, 0.965, 0.982],
        [-0.5, -0.571, -0.5, -0.306, -0.152, -0.073, -0.036],
        [100, 75, 53.59, 40.19, 34.04, 31.45, 30.31],
    ),
    "collapsing": (
        [0.5, 0.125, 0.1, 0.083, 0.071, 0.062, 0.056],
        [0.0, -0.75, -0.8, -0.833, -0.857, -0.875, -0.889],
        [100, 100, 62.5, 37.5, 21.88, 12.51, 7.034],
    ),
    "hourglass": (
        [0.5, 0.667, 0.833, 0.932, 0.975, 0.991, 0.997],
        [-0.5, 0.0, 0.444, 0.75, 0.904, 0.966, 0.989],
        [100, 75, 75, 91.65, 126.02, 182.98, 271.36],
    ),
    "alternating": (
        [0.5, 0.25, 0.5, 0.25, 0.5, 0.25, 0.5],
        [0.0, -0.5, 0.0, -0.5, 0.0, -0.5, 0.0],
        [100, 100, 75, 75, 56.25, 56.25, 42.19],
    ),
}

# three printed decimals; 0.0625 is printed as 0.062
PRINTED = 5.01e-4


@pytest.fixture
def catalog():
    return CatalogService()


class TestWorkedExample:
    """Test cases for the alternating rule set's first epoch, computed by hand."""

    def test_production_distribution(self, catalog):
        """Test uniform pairs give each production a quarter."""
        rules = catalog.get_rule_set("alternating")
        result = production_distribution(uniform_tuple_distribution(AB, 2), rules)
        assert result.mass == {"bbb": 0.25, "ab": 0.25, "bb": 0.25, "a": 0.25}

    def test_production_distribution_aggregates(self):
        """Test tuples with the same image are merged."""
        rules = RuleSet.from_mapping({"aa": "ab", "ab": "ab", "ba": "ab", "bb": "ab"})
        result = production_distribution(uniform_tuple_distribution(AB, 2), rules)
        assert result.mass == {"ab": 1.0}

    def test_production_distribution_point_mass(self, catalog):
        """Test a point mass on aa."""
        rules = catalog.get_rule_set("hourglass")
        result = production_distribution(TupleDistribution(mass={"aa": 1.0}), rules)
        assert result.mass == {"aaa": 1.0}

    def test_selection_distribution(self):
        """Test selection is proportional to production length."""
        result = selection_distribution(WORKED)
        assert result.get("bbb") == pytest.approx(3 / 8, abs=1e-12)
        assert result.get("ab") == pytest.approx(2 / 8, abs=1e-12)
        assert result.get("bb") == pytest.approx(2 / 8, abs=1e-12)
        assert result.get("a") == pytest.approx(1 / 8, abs=1e-12)

    def test_selection_skips_empty(self):
        """Test the empty production is never selected."""
        result = selection_distribution(ProductionDistribution(mass={"ab": 0.5, "": 0.5}))
        assert result.get("ab") == 1.0
        assert result.get("") == 0.0

    def test_selection_all_empty(self):
        """Test zero expected length."""
        with pytest.raises(AllEmptyError):
            selection_distribution(ProductionDistribution(mass={"": 1.0}))

    def test_prefix_probability(self):
        """Test prefix probabilities, including the empty-production factor."""
        assert prefix_probability("b", WORKED) == pytest.approx(0.5, abs=1e-12)
        assert prefix_probability("", WORKED) == 1.0
        assert prefix_probability("ba", ProductionDistribution(mass={"a": 0.5, "b": 0.5})) == 0.25
        assert prefix_probability("b", ProductionDistribution(mass={"ab": 0.5, "": 0.5})) == 0.0
        assert prefix_probability("a", ProductionDistribution(mass={"ab": 0.5, "": 0.5})) == 1.0

    def test_prefix_probability_modes(self):
        """Test DISCARD leaves the empty-production mass out."""
        prod = ProductionDistribution(mass={"ab": 0.5, "": 0.5})
        assert prefix_probability("a", prod, EmptyProductionMode.DISCARD) == 0.5

    def test_prefix_probability_all_empty(self):
        """Test P(ε) = 1."""
        with pytest.raises(AllEmptyError):
            prefix_probability("a", ProductionDistribution(mass={"": 1.0}))

    def test_conditional_tuple_probability(self):
        """Test P(bb | position lies in bbb) = 5/6."""
        assert conditional_tuple_probability("bb", "bbb", WORKED) == pytest.approx(5 / 6, abs=1e-12)

    def test_next_tuple_distribution(self, catalog):
        """Test the next-epoch pair distribution is 1/16, 3/16, 3/16, 9/16."""
        result = next_tuple_distribution(WORKED, catalog.get_rule_set("alternating"))
        assert result.get("aa") == pytest.approx(1 / 16, abs=1e-12)
        assert result.get("ab") == pytest.approx(3 / 16, abs=1e-12)
        assert result.get("ba") == pytest.approx(3 / 16, abs=1e-12)
        assert result.get("bb") == pytest.approx(9 / 16, abs=1e-12)

    def test_next_tuple_distribution_periodic_word(self, catalog):
        """Test ababab... gives both phases equally."""
        rules = catalog.get_rule_set("alternating")
        result = next_tuple_distribution(ProductionDistribution(mass={"ab": 1.0}), rules)
        assert result.get("ab") == pytest.approx(0.5, abs=1e-12)
        assert result.get("ba") == pytest.approx(0.5, abs=1e-12)
        assert result.get("aa") == 0.0

        constant = next_tuple_distribution(ProductionDistribution(mass={"aa": 1.0}), rules)
        assert constant.get("aa") == 1.0

    def test_next_tuple_distribution_all_empty(self, catalog):
        """Test an all-empty production distribution has no next epoch."""
        with pytest.raises(AllEmptyError):
            next_tuple_distribution(ProductionDistribution(mass={"": 1.0}), catalog.get_rule_set("vanishing"))

    def test_expected_lengths(self):
        """Test expected production length and growth."""
        assert expected_production_length(WORKED) == 2.0
        assert expected_production_length(ProductionDistribution(mass={"": 1.0})) == 0.0
        assert expected_production_length(ProductionDistribution(mass={"aaa": 1.0})) == 3.0
        assert expected_growth(WORKED, 2) == 0.0
        assert expected_growth(ProductionDistribution(mass={"ab": 1.0}), 2) == 0.0

    def test_symbol_densities(self):
        """Test densities of the produced symbols."""
        assert symbol_densities(WORKED, AB) == {"a": 0.25, "b": 0.75}
        assert symbol_densities(ProductionDistribution(mass={"ab": 1.0}), AB) == {"a": 0.5, "b": 0.5}
        with pytest.raises(AllEmptyError):
            symbol_densities(ProductionDistribution(mass={"": 1.0}), AB)

    def test_project_length(self):
        """Test the epoch length projection."""
        assert project_length(100, -0.5, 2) == 75.0
        assert project_length(75, 0.444, 2) == pytest.approx(91.65, abs=1e-9)
        assert project_length(42.0, 0.0, 2) == 42.0
        assert project_length(10.0, -3.0, 2) == 0.0

    def test_round_half_up(self):
        """Test rounding used for projection."""
        assert round_half_up(0.4444444, 3) == 0.444
        assert round_half_up(0.0625, 3) == 0.063
        assert round_half_up(-0.1875, 3) == -0.188


class TestPredictEpochs:
    """Test cases for chained epoch predictions."""

    def test_alternating_listing(self, catalog):
        """Test the alternating rule set's exact lengths and densities."""
        rules = catalog.get_rule_set("alternating")
        run = predict_epochs(uniform_tuple_distribution(AB, 2), rules, 10000, 10)
        assert run.lengths() == pytest.approx(
            [10000, 10000, 7500, 7500, 5625, 5625, 4218.75, 4218.75, 3164.0625, 3164.0625],
            rel=1e-12,
        )
        for prediction in run.epochs:
            expected = {"a": 0.5, "b": 0.5} if prediction.epoch % 2 == 0 else {"a": 0.25, "b": 0.75}
            assert prediction.densities == pytest.approx(expected, abs=1e-12)
        assert not run.terminated

    def test_period_two_observables(self, catalog):
        """Test densities and growth repeat every two epochs while pair statistics drift."""
        rules = catalog.get_rule_set("alternating")
        run = predict_epochs(uniform_tuple_distribution(AB, 2), rules, 100, 8)
        for prediction in run.epochs:
            expected_growth = 0.0 if prediction.epoch % 2 == 0 else -0.5
            assert prediction.expected_growth == pytest.approx(expected_growth, abs=1e-12)

        epoch_two = run.epochs[2].tuple_dist
        assert epoch_two.get("aa") == pytest.approx(27 / 96, abs=1e-12)
        assert epoch_two.get("ab") == pytest.approx(21 / 96, abs=1e-12)
        assert epoch_two.get("ba") == pytest.approx(21 / 96, abs=1e-12)
        assert epoch_two.get("bb") == pytest.approx(27 / 96, abs=1e-12)

    def test_hourglass_table(self, catalog):
        """Test the hourglass growth and length rows."""
        rules = catalog.get_rule_set("hourglass")
        run = predict_epochs(uniform_tuple_distribution(AB, 2), rules, 100, 7, growth_decimals=3)
        growths = [-0.500, 0.000, 0.444, 0.750, 0.904, 0.966, 0.989]
        lengths = [100, 75, 75, 91.65, 126.02, 182.98, 271.36]
        assert run.growths() == pytest.approx(growths, abs=5e-4)
        assert run.lengths() == pytest.approx(lengths, abs=0.01)

    @pytest.mark.parametrize("name", list(REFERENCE_TABLES))
    def test_reference_tables(self, catalog, name):
        """Test densities, growth and length against the seven-epoch reference tables."""
        densities, growths, lengths = REFERENCE_TABLES[name]
        rules = catalog.get_rule_set(name)
        run = predict_epochs(uniform_tuple_distribution(AB, 2), rules, 100, 7,
                             mode=EmptyProductionMode.DISCARD, growth_decimals=3)
        assert len(run.epochs) == 7
        assert run.density_series("a") == pytest.approx(densities, abs=PRINTED)
        assert run.density_series("b") == pytest.approx([1 - d for d in densities], abs=PRINTED)
        assert run.growths() == pytest.approx(growths, abs=PRINTED)
        assert run.lengths() == pytest.approx(lengths, abs=0.01)

    def test_vanishing_modes_differ(self, catalog):
        """Test the empty production changes the update only through the mode."""
        rules = catalog.get_rule_set("vanishing")
        start = uniform_tuple_distribution(AB, 2)
        geometric = predict_epochs(start, rules, 100, 2, mode=EmptyProductionMode.GEOMETRIC)
        discard = predict_epochs(start, rules, 100, 2, mode=EmptyProductionMode.DISCARD)
        assert geometric.epochs[1].expected_growth == pytest.approx(-5 / 9, abs=1e-12)
        assert discard.epochs[1].expected_growth == pytest.approx(-4 / 7, abs=1e-12)

    def test_modes_agree_without_empty_productions(self, catalog):
        """Test both modes coincide when no production is empty."""
        rules = catalog.get_rule_set("decelerating")
        start = uniform_tuple_distribution(AB, 2)
        geometric = predict_epochs(start, rules, 100, 5, mode=EmptyProductionMode.GEOMETRIC)
        discard = predict_epochs(start, rules, 100, 5, mode=EmptyProductionMode.DISCARD)
        assert geometric.lengths() == discard.lengths()

    def test_identity_rules(self):
        """Test a length-preserving rule set is a fixed point."""
        rules = RuleSet.from_mapping({"aa": "aa", "ab": "ab", "ba": "ba", "bb": "bb"})
        run = predict_epochs(uniform_tuple_distribution(AB, 2), rules, 100, 5)
        assert run.lengths() == [100.0] * 5
        assert run.growths() == [0.0] * 5
        for prediction in run.epochs:
            assert prediction.densities == {"a": 0.5, "b": 0.5}

    def test_termination(self):
        """Test the chain stops once the projected length is below n."""
        rules = RuleSet.from_mapping({"aa": "", "ab": "", "ba": "", "bb": "a"})
        run = predict_epochs(uniform_tuple_distribution(AB, 2), rules, 100, 10)
        assert run.terminated
        assert run.lengths() == [100.0, 12.5]
        assert run.growths() == [-1.75, -2.0]

    def test_start_below_n(self, catalog):
        """Test an initial length that cannot take a step."""
        run = predict_epochs(uniform_tuple_distribution(AB, 2), catalog.get_rule_set("hourglass"), 1, 3)
        assert run.terminated
        assert run.epochs == []

    def test_all_empty_epoch_terminates(self):
        """Test an epoch selecting only empty productions ends the chain cleanly."""
        rules = RuleSet.from_mapping({"aa": "", "ab": "", "ba": "", "bb": "aa"})
        run = predict_epochs(uniform_tuple_distribution(AB, 2), rules, 100, 5)
        assert run.terminated
        assert run.lengths() == [100.0, 25.0]
        assert run.growths() == [-1.5, -2.0]
        assert run.epochs[1].prod_dist.empty_mass() == 1.0
        assert run.epochs[1].densities == {"a": 1.0, "b": 0.0}

    @pytest.mark.parametrize("mass", [
        {"aa": 0.5, "xyz": 0.5},
        {"aa": 0.5, "a": 0.5},
        {"aa": 0.5, "ac": 0.5},
    ])
    def test_foreign_initial_tuple(self, catalog, mass):
        """Test initial keys outside the length-n words of the alphabet."""
        with pytest.raises(ForeignTupleError) as excinfo:
            predict_epochs(TupleDistribution(mass=mass), catalog.get_rule_set("hourglass"), 100, 3)
        assert isinstance(excinfo.value, DistributionError)
        assert excinfo.value.word != "aa"


class TestPredictLengthAtStep:
    """Test cases for interpolated lengths."""

    @pytest.fixture
    def hourglass_run(self, catalog):
        return predict_epochs(uniform_tuple_distribution(AB, 2), catalog.get_rule_set("hourglass"), 100, 7)

    def test_step_zero(self, hourglass_run):
        """Test the initial length."""
        assert predict_length_at_step(hourglass_run.epochs, 0, 2) == 100.0

    def test_epoch_midpoint(self, hourglass_run):
        """Test linear growth inside an epoch."""
        assert predict_length_at_step(hourglass_run.epochs, 25, 2) == pytest.approx(87.5)

    def test_epoch_end(self, hourglass_run):
        """Test the end of epoch 0 meets the next epoch start."""
        assert predict_length_at_step(hourglass_run.epochs, 50, 2) == pytest.approx(75.0)

    def test_epoch_boundaries_follow_expected_steps(self, hourglass_run):
        """Test each epoch spans expected_steps steps."""
        elapsed = 0.0
        for current, following in zip(hourglass_run.epochs, hourglass_run.epochs[1:]):
            elapsed += current.expected_steps(2)
            assert predict_length_at_step(hourglass_run.epochs, elapsed, 2) == pytest.approx(
                following.expected_length
            )

    def test_beyond_horizon(self, hourglass_run):
        """Test a step past the last epoch."""
        with pytest.raises(BeyondHorizonError):
            predict_length_at_step(hourglass_run.epochs, 10_000, 2)


class TestPredictorService:
    """Test cases for the service defaults."""

    def test_settings_defaults(self, catalog):
        """Test mode and rounding come from settings."""
        service = PredictorService(ConfigService(AppSettings(
            empty_production_mode=EmptyProductionMode.DISCARD, growth_decimals=3
        )))
        run = service.predict(catalog.get_rule_set("vanishing"), 100, 7)
        assert run.mode == EmptyProductionMode.DISCARD
        assert run.growth_decimals == 3
        assert run.lengths() == pytest.approx(REFERENCE_TABLES["vanishing"][2], abs=0.01)

    def test_length_at_step(self, catalog):
        """Test the service's interpolation helper."""
        service = PredictorService(ConfigService(AppSettings()))
        rules = catalog.get_rule_set("hourglass")
        run = service.predict(rules, 100, 3)
        assert service.length_at_step(run, rules, 50) == pytest.approx(75.0)

    def test_unnormalized_initial_distribution(self, catalog):
        """Test initial weights are scaled to unit sum."""
        service = PredictorService(ConfigService(AppSettings()))
        rules = catalog.get_rule_set("hourglass")
        weights = TupleDistribution(mass={"aa": 2.0, "ab": 2.0, "ba": 2.0, "bb": 2.0})
        assert service.predict(rules, 100, 4, initial_tuple_dist=weights).lengths() == pytest.approx(
            service.predict(rules, 100, 4).lengths()
        )
