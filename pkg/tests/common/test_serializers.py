from fractions import Fraction

import pytest

from classical_drg import fields
from classical_drg.exceptions import ValidationError
from classical_drg.gibbs import gibbs_distribution, gibbs_point
from classical_drg.limits import PresetName, RegimeKind
from classical_drg.params import intersection_array
from classical_drg.serializers import (
    ClassicalParamsSerializer,
    ClassifyInputSerializer,
    DiscreteMeasureSerializer,
    FamilyInputSerializer,
    GibbsPointSerializer,
    GlobalOptionsSerializer,
    IntersectionArraySerializer,
    LimitInputSerializer,
    OracleInputSerializer,
    OutputRecordSerializer,
    ParamsInputSerializer,
    QcltInputSerializer,
    Serializer,
)


class SomeSerializer(Serializer):
    pass


def test_serializer_data_needs_instance():
    with pytest.raises(AssertionError, match="Pass an `instance`"):
        _ = SomeSerializer(data={"test": 1}).data


def test_serializer_errors_attr_called_invalid():
    with pytest.raises(AssertionError, match="must call `.is_valid()"):
        _ = SomeSerializer().errors


def test_serializer_validated_data_attr_called_invalid():
    with pytest.raises(AssertionError, match="must call `.is_valid()"):
        _ = SomeSerializer().validated_data


def test_serializer_is_valid_needs_data():
    with pytest.raises(AssertionError, match="without `data=`"):
        SomeSerializer().is_valid()


class DataAttrSerializer(Serializer):
    test = fields.Int()


def test_serializer_data_attr_with_instance():
    serializer = DataAttrSerializer({"test": 123})
    assert serializer.data == {"test": 123}
    assert serializer.data is serializer.data


def test_serializer_errors():
    serializer = DataAttrSerializer(data={"test": "not an integer"})
    assert not serializer.is_valid()
    assert "test" in serializer.errors
    assert serializer.validated_data == {}
    with pytest.raises(ValidationError) as err:
        serializer.is_valid(raise_exception=True)
    assert "test" in err.value.detail


def test_serializer_unknown_fields_excluded():
    serializer = DataAttrSerializer(data={"test": 1, "other": 2})
    assert serializer.is_valid()
    assert serializer.validated_data == {"test": 1}, "unknown fields have to be excluded"


def test_serializer_field_inheritance():
    class BaseSerializer(Serializer):
        field_one = fields.Int()
        fields_two = fields.Str()

    class InheritSerializer(BaseSerializer):
        pass

    serializer = InheritSerializer()
    assert len(serializer.fields) == len(BaseSerializer().fields)


def test_classical_params_serializer(grassmann_cp):
    data = ClassicalParamsSerializer(grassmann_cp).data
    assert data["d"] == 2
    assert data["b"] == 2
    assert data["alpha"] == {"num": 2, "den": 1, "float": 2.0}
    assert data["beta"] == {"num": 6, "den": 1, "float": 6.0}


def test_intersection_array_serializer(grassmann_cp):
    data = IntersectionArraySerializer(intersection_array(grassmann_cp)).data
    assert [value["num"] for value in data["b_seq"]] == [18, 8, 0]
    assert data["diameter"] == 2
    assert data["vertex_count"]["num"] == 35, "derived vertex count isn't dumped"


def test_gibbs_serializers(grassmann_cp, grassmann_st):
    gp = gibbs_point(grassmann_cp, grassmann_st, Fraction(1, 2))
    data = GibbsPointSerializer(gp).data
    assert data["in_pi"] is True
    assert data["variance"]["num"] == 54
    assert [value["float"] for value in data["kt_spectrum"]] == [14.0, 1.5, 0.0]

    measure = DiscreteMeasureSerializer(gibbs_distribution(grassmann_cp, grassmann_st, gp.t, gp)).data
    assert measure["labels"] == [0, 1, 2]
    assert measure["masses"] == pytest.approx([0.4, 0.6, 0.0])
    assert measure["total_mass"] == 1.0
    assert measure["truncated"] is False


def test_output_record_serializer():
    data = OutputRecordSerializer({"command": "families", "inputs": {}, "payload": {"rows": []}}).data
    assert data["schema_version"] == "1"
    assert data["command"] == "families"
    assert data["payload"] == {"rows": []}


def test_params_input_serializer():
    serializer = ParamsInputSerializer(data={"d": "2", "b": "-2", "alpha": "1/2", "beta": "6"})
    serializer.is_valid(raise_exception=True)
    assert serializer.validated_data == {"d": 2, "b": -2, "alpha": Fraction(1, 2), "beta": Fraction(6)}


@pytest.mark.parametrize("data, field", [
    ({"d": "0", "b": "2", "alpha": "1", "beta": "1"}, "d"),
    ({"d": "2", "b": "0", "alpha": "1", "beta": "1"}, "b"),
    ({"d": "2", "b": "2", "alpha": "0.5.1", "beta": "1"}, "alpha"),
    ({"d": "2", "b": "2", "alpha": "1"}, "beta"),
])
def test_params_input_serializer_invalid(data, field):
    serializer = ParamsInputSerializer(data=data)
    assert not serializer.is_valid()
    assert field in serializer.errors, f"`{field}` error isn't reported"
    with pytest.raises(ValidationError) as err:
        ParamsInputSerializer(data=data).is_valid(raise_exception=True)
    assert err.value.exit_code == 65


def test_limit_input_serializer_preset():
    serializer = LimitInputSerializer(data={"preset": "grassmann", "q": "2", "delta": "1"})
    serializer.is_valid(raise_exception=True)
    data = serializer.validated_data
    assert data["preset"] is PresetName.GRASSMANN
    assert data["delta"] == 1
    assert data["kind"] is None
    assert data["derived_gamma"] is False


def test_limit_input_serializer_regime():
    serializer = LimitInputSerializer(data={"kind": "case_ii", "b": "2", "alpha": "0", "rho": "0", "eta": "1.5"})
    serializer.is_valid(raise_exception=True)
    assert serializer.validated_data["kind"] is RegimeKind.CASE_II
    assert serializer.validated_data["eta"] == 1.5


@pytest.mark.parametrize("data", [
    {"q": "2"},
    {"preset": "grassmann", "kind": "case_ii", "q": "2", "b": "2", "alpha": "0", "rho": "1"},
    {"preset": "grassmann"},
    {"kind": "case_i_rho", "b": "2"},
    {"kind": "case_ii", "b": "2", "alpha": "0", "rho": "1", "derived_gamma": True},
    {"preset": "grassmann", "q": "2", "parity": "sometimes"},
])
def test_limit_input_serializer_invalid(data):
    assert not LimitInputSerializer(data=data).is_valid()


def test_family_input_serializer():
    serializer = FamilyInputSerializer(
        data={"family": "dual_polar", "q": "2", "kind": "C", "d_list": "4,6,8", "t_rule": "power:3/4"}
    )
    serializer.is_valid(raise_exception=True)
    data = serializer.validated_data
    assert data["d_list"] == [4, 6, 8]
    assert data["kind"].e == 1
    assert data["t_rule"].slope == Fraction(3, 4)


def test_family_input_serializer_rejects_nonpositive_diameter():
    serializer = FamilyInputSerializer(data={"family": "grassmann", "q": "2", "n": "8", "d_list": "0,2",
                                             "t_rule": "zero"})
    assert not serializer.is_valid()
    assert "d_list" in serializer.errors


def test_classify_input_serializer():
    serializer = ClassifyInputSerializer(data={"family": "grassmann", "q": "2", "delta": "1", "t_rule": "power:1",
                                               "d_list": "4,6"})
    serializer.is_valid(raise_exception=True)
    assert serializer.validated_data["depth"] is None
    assert "d_list" not in serializer.validated_data
    serializer = ClassifyInputSerializer(data={"family": "grassmann", "q": "2", "t_rule": "zero", "depth": "10"})
    assert not serializer.is_valid()
    assert "depth" in serializer.errors


def test_oracle_input_serializer_defaults():
    serializer = OracleInputSerializer(data={})
    assert serializer.is_valid()
    assert serializer.validated_data == {"name": "grassmann-2-4-2", "dump": None}


def test_qclt_input_serializer_splits_words():
    serializer = QcltInputSerializer(
        data={"family": "grassmann", "q": "2", "delta": "1", "d_list": "4", "t_rule": "power:1", "words": "+-, o+-"}
    )
    serializer.is_valid(raise_exception=True)
    assert [str(word) for word in serializer.validated_data["words"]] == ["+-", "o+-"]
    assert serializer.validated_data["truncation"] == 12


def test_oracle_input_serializer():
    serializer = OracleInputSerializer(data={"name": "all"})
    assert serializer.is_valid()
    serializer = OracleInputSerializer(data={"name": "petersen"})
    assert not serializer.is_valid()
    assert "name" in serializer.errors


def test_global_options_serializer():
    serializer = GlobalOptionsSerializer(data={"tol": "1e-9", "jmax": "12", "jmin": None, "fmt": "csv"})
    serializer.is_valid(raise_exception=True)
    assert serializer.validated_data["tol"] == 1e-9
    assert serializer.validated_data["jmax"] == 12
    assert serializer.validated_data["jmin"] is None

    serializer = GlobalOptionsSerializer(data={"tol": "-1", "fmt": "xml", "jmin": "3"})
    assert not serializer.is_valid()
    assert {"tol", "fmt", "jmin"} <= set(serializer.errors)
