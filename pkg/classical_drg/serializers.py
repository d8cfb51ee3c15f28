import typing

import marshmallow as ma

from classical_drg import fields
from classical_drg.exceptions import ValidationError
from classical_drg.families import DualPolarType, FamilyName
from classical_drg.limits import D_EVEN, D_ODD, N_EVEN, N_ODD, PresetName, RegimeKind
from classical_drg.oracle.battery import BATTERY
from classical_drg.settings import OUTPUT_FORMATS

__all__ = (
    "SCHEMA_VERSION",
    "SUBNETS",
    "Serializer",
    "ClassicalParamsSerializer",
    "IntersectionArraySerializer",
    "SpectralTableSerializer",
    "GibbsPointSerializer",
    "DiscreteMeasureSerializer",
    "LimitRegimeSerializer",
    "DiagnosticsSerializer",
    "RegimeReportSerializer",
    "ConvergenceRowSerializer",
    "QcltRowSerializer",
    "OracleReportSerializer",
    "CatalogEntrySerializer",
    "OutputRecordSerializer",
    "ParamsInputSerializer",
    "GibbsInputSerializer",
    "PsdCheckInputSerializer",
    "LimitInputSerializer",
    "FamilyShapeSerializer",
    "ClassifyInputSerializer",
    "FamilyInputSerializer",
    "ConvergeInputSerializer",
    "QcltInputSerializer",
    "OracleInputSerializer",
    "GlobalOptionsSerializer",
)

SCHEMA_VERSION = "1"
SUBNETS = (D_EVEN, D_ODD, N_EVEN, N_ODD)


class Serializer(ma.Schema):
    """
    Schema read like a drf serializer: `Serializer(instance).data` dumps an object,
    `Serializer(data=...)` loads input through `is_valid()` into `validated_data`.
    """

    class Meta:
        unknown = ma.EXCLUDE

    def __init__(self, instance: typing.Any = None, data: typing.Optional[dict] = None, **kwargs):
        self.instance = instance
        self.initial_data = data
        super().__init__(**kwargs)

    @property
    def data(self) -> dict:
        if self.instance is None:
            raise AssertionError("Pass an `instance` to read the serialized `.data`.")
        if not hasattr(self, "_data"):
            self._data = self.dump(self.instance)
        return self._data

    @property
    def errors(self) -> dict:
        if not hasattr(self, "_errors"):
            raise AssertionError("You must call `.is_valid()` before accessing `.errors`.")
        return self._errors

    @property
    def validated_data(self) -> dict:
        if not hasattr(self, "_validated_data"):
            raise AssertionError("You must call `.is_valid()` before accessing `.validated_data`.")
        return self._validated_data

    def is_valid(self, raise_exception: bool = False) -> bool:
        assert self.initial_data is not None, "Cannot call `.is_valid()` without `data=`."
        if not hasattr(self, "_validated_data"):
            try:
                self._validated_data = self.load(self.initial_data)
            except ma.ValidationError as exc:
                self._validated_data = {}
                self._errors = exc.messages
            else:
                self._errors = {}

        if self._errors and raise_exception:
            raise ValidationError(self._errors)
        return not self._errors


# output

class ClassicalParamsSerializer(Serializer):
    d = fields.Integer()
    b = fields.Integer()
    alpha = fields.Rational()
    beta = fields.Rational()


class IntersectionArraySerializer(Serializer):
    b_seq = fields.List(fields.Rational())
    c_seq = fields.List(fields.Rational())
    a_seq = fields.List(fields.Rational())
    k_seq = fields.List(fields.Rational())
    k = fields.Rational()
    diameter = fields.Integer()
    vertex_count = fields.Rational()


class SpectralTableSerializer(Serializer):
    theta = fields.List(fields.Rational())
    mult = fields.List(fields.Rational())
    vertex_count = fields.Rational()
    v_matrix = fields.List(fields.List(fields.Rational()))
    k_seq = fields.List(fields.Rational())
    mult_fallback = fields.List(fields.Integer())
    v_closed_form_checked = fields.Boolean()
    vertex_count_closed_form_checked = fields.Boolean()


class GibbsPointSerializer(Serializer):
    t = fields.Rational()
    mean = fields.Rational()
    variance = fields.Rational()
    kt_spectrum = fields.List(fields.Rational())
    in_pi = fields.Method("get_in_pi")

    def get_in_pi(self, obj) -> bool:
        return min(obj.kt_spectrum) >= 0


class DiscreteMeasureSerializer(Serializer):
    labels = fields.List(fields.Integer())
    atoms = fields.List(fields.Real())
    masses = fields.List(fields.Real())
    total_mass = fields.Real()
    truncated = fields.Boolean()
    tail_bound = fields.Real()
    positivity = fields.Boolean()


class LimitRegimeSerializer(Serializer):
    kind = fields.Enum(RegimeKind)
    b = fields.Integer()
    alpha = fields.Rational()
    gamma = fields.Real()
    rho = fields.Real()
    eta = fields.Real(allow_none=True)
    sigma = fields.Real()
    normalizer = fields.Real()


class DiagnosticsSerializer(Serializer):
    d = fields.List(fields.Integer())
    t_sqrt_k = fields.List(fields.Real())
    beta_over_sqrt_k = fields.List(fields.Real())
    sqrt_k_over_bc = fields.List(fields.Real(allow_none=True))
    tags = fields.List(fields.String())


class RegimeReportSerializer(Serializer):
    regimes = fields.Dict(keys=fields.String(), values=fields.Nested(LimitRegimeSerializer))
    diagnostics = fields.Nested(DiagnosticsSerializer)
    split = fields.Boolean()


class ConvergenceRowSerializer(Serializer):
    d = fields.Integer()
    t = fields.Rational()
    max_discrepancy = fields.Real()
    atom_errors = fields.Dict(keys=fields.String(), values=fields.Real())
    mass_errors = fields.Dict(keys=fields.String(), values=fields.Real())
    positivity = fields.Boolean()


class QcltRowSerializer(Serializer):
    word = fields.String()
    d = fields.Integer()
    finite = fields.Real()
    limit = fields.Real()
    difference = fields.Real()


class OracleReportSerializer(Serializer):
    name = fields.String()
    n_vertices = fields.Integer()
    diameter = fields.Integer()
    cp = fields.Nested(ClassicalParamsSerializer)
    t = fields.Rational()
    intersection_match = fields.Boolean()
    vertex_count_match = fields.Boolean()
    multiplicity_match = fields.Boolean()
    eigenvalue_error = fields.Real(allow_none=True)
    moment_error = fields.Real(allow_none=True)
    quantum_error = fields.Real(allow_none=True)
    kt_min_eigenvalue = fields.Real(allow_none=True)
    base_vertices = fields.List(fields.Integer())
    passed = fields.Boolean()


class CatalogEntrySerializer(Serializer):
    name = fields.Enum(FamilyName)
    parameters = fields.List(fields.String())
    presets = fields.List(fields.String())
    subnets = fields.List(fields.String())


class OutputRecordSerializer(Serializer):
    schema_version = fields.Constant(SCHEMA_VERSION)
    command = fields.String()
    inputs = fields.Dict()
    payload = fields.Raw()


# input

class ParamsInputSerializer(Serializer):
    d = fields.Integer(required=True, strict=False, validate=ma.validate.Range(min=1))
    b = fields.Integer(required=True, strict=False)
    alpha = fields.Rational(required=True)
    beta = fields.Rational(required=True)

    @ma.validates("b")
    def validate_b(self, value, **kwargs):
        if value == 0:
            raise ma.ValidationError("`b` has to be a nonzero integer.")


class GibbsInputSerializer(ParamsInputSerializer):
    t = fields.Rational(required=True)


class PsdCheckInputSerializer(ParamsInputSerializer):
    i_max = fields.Integer(load_default=6, strict=False, validate=ma.validate.Range(min=0))


class LimitInputSerializer(Serializer):
    """Either a preset with its shape parameters, or the fields of a regime"""

    preset = fields.Enum(PresetName, load_default=None)
    q = fields.Integer(load_default=None, strict=False, validate=ma.validate.Range(min=2))
    delta = fields.Rational(load_default=None)
    epsilon = fields.Integer(load_default=0, strict=False, validate=ma.validate.OneOf((0, 1)))
    sign = fields.Integer(load_default=1, strict=False, validate=ma.validate.OneOf((-1, 1)))
    e = fields.Rational(load_default=None)
    parity = fields.String(load_default=None, validate=ma.validate.OneOf(SUBNETS))

    kind = fields.Enum(RegimeKind, load_default=None)
    b = fields.Integer(load_default=None, strict=False)
    alpha = fields.Rational(load_default=None)
    rho = fields.Real(load_default=None)
    eta = fields.Real(load_default=None)

    gamma = fields.Real(load_default=None)
    derived_gamma = fields.Boolean(load_default=False)

    @ma.validates_schema
    def validate_source(self, data, **kwargs):
        if (data["preset"] is None) == (data["kind"] is None):
            raise ma.ValidationError("Give exactly one of `preset` and `kind`.", "preset")
        if data["preset"] is not None and data["q"] is None:
            raise ma.ValidationError("Presets need their base `q`.", "q")
        if data["kind"] is not None:
            missing = [name for name in ("b", "alpha", "rho") if data[name] is None]
            if missing:
                raise ma.ValidationError(f"Regimes need {', '.join(missing)}.", "kind")
            if data["derived_gamma"]:
                raise ma.ValidationError("Only presets derive gamma.", "derived_gamma")


class FamilyShapeSerializer(Serializer):
    family = fields.Enum(FamilyName, required=True)
    q = fields.Integer(required=True, strict=False, validate=ma.validate.Range(min=2))
    n = fields.Integer(load_default=None, strict=False)
    e = fields.Integer(load_default=None, strict=False)
    delta = fields.Rational(load_default=None)
    epsilon = fields.Integer(load_default=None, strict=False, validate=ma.validate.OneOf((0, 1)))
    kind = fields.Enum(DualPolarType, load_default=None)
    t_rule = fields.TRuleField(required=True)
    parity = fields.String(load_default=None, validate=ma.validate.OneOf(SUBNETS))


class ClassifyInputSerializer(FamilyShapeSerializer):
    depth = fields.Integer(load_default=None, strict=False, validate=ma.validate.Range(min=20))


class FamilyInputSerializer(FamilyShapeSerializer):
    d_list = fields.IntegerList(required=True, validate=ma.validate.Length(min=1))

    @ma.validates("d_list")
    def validate_d_list(self, value, **kwargs):
        if any(d < 1 for d in value):
            raise ma.ValidationError("Diameters have to be positive.")


class ConvergeInputSerializer(FamilyInputSerializer):
    pass


class QcltInputSerializer(FamilyInputSerializer):
    words = fields.List(fields.Word(), load_default=None)
    truncation = fields.Integer(load_default=12, strict=False, validate=ma.validate.Range(min=2))

    @ma.pre_load
    def split_words(self, data, **kwargs):
        words = data.get("words")
        if isinstance(words, str):
            data = dict(data, words=[word.strip() for word in words.split(",") if word.strip()])
        return data


class OracleInputSerializer(Serializer):
    name = fields.String(load_default="grassmann-2-4-2", validate=ma.validate.OneOf(tuple(BATTERY) + ("all",)))
    dump = fields.String(load_default=None)


class GlobalOptionsSerializer(Serializer):
    tol = fields.Real(load_default=None, validate=ma.validate.Range(min=0, min_inclusive=False))
    prec = fields.Real(load_default=None, validate=ma.validate.Range(min=0, min_inclusive=False))
    jmax = fields.Integer(load_default=None, strict=False, validate=ma.validate.Range(min=0))
    jmin = fields.Integer(load_default=None, strict=False, validate=ma.validate.Range(max=0))
    fmt = fields.String(load_default=None, validate=ma.validate.OneOf(OUTPUT_FORMATS))
    seed = fields.Integer(load_default=None, strict=False)
