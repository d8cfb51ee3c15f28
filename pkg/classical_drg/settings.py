import os
import typing

from dotenv import load_dotenv

__all__ = (
    "JSON",
    "CSV",
    "OUTPUT_FORMATS",
    "ENV_PREFIX",
    "Config",
    "get_global_config",
    "set_global_config",
)

JSON = "json"
CSV = "csv"
OUTPUT_FORMATS = (JSON, CSV)

ENV_PREFIX = "CLASSICAL_DRG_"

_FLOAT_FIELDS = ("tol", "prec", "cluster_tol", "residual_tol")
_INT_FIELDS = ("jmax", "jmin", "seed", "jacobi_max_size", "max_vertices", "far_diameter")


class Config:
    def __init__(
        self,
        *,
        tol: float = 1e-10,
        prec: float = 1e-14,
        jmax: int = 40,
        jmin: int = -12,
        fmt: str = JSON,
        seed: int = 0,
        cluster_tol: float = 1e-7,
        residual_tol: float = 1e-8,
        jacobi_max_size: int = 64,
        max_vertices: int = 2000,
        far_diameter: int = 120,
    ):
        for name, value in (("tol", tol), ("prec", prec), ("cluster_tol", cluster_tol),
                            ("residual_tol", residual_tol)):
            assert isinstance(value, (int, float)) and value > 0, (
                f"`{name}` has to be a positive number"
            )
        self.tol = float(tol)
        self.prec = float(prec)
        self.cluster_tol = float(cluster_tol)
        self.residual_tol = float(residual_tol)

        assert isinstance(jmax, int) and jmax >= 0, "`jmax` has to be a nonnegative integer"
        assert isinstance(jmin, int) and jmin <= 0, "`jmin` has to be a nonpositive integer"
        self.jmax = jmax
        self.jmin = jmin

        assert fmt in OUTPUT_FORMATS, (
            f"`fmt` has to be one of {', '.join(OUTPUT_FORMATS)}"
        )
        self.fmt = fmt

        assert isinstance(seed, int), "`seed` has to be an integer"
        self.seed = seed

        assert isinstance(jacobi_max_size, int) and jacobi_max_size >= 0, (
            "`jacobi_max_size` has to be a nonnegative integer"
        )
        self.jacobi_max_size = jacobi_max_size

        assert isinstance(max_vertices, int) and max_vertices > 0, (
            "`max_vertices` has to be a positive integer"
        )
        self.max_vertices = max_vertices

        # the tail of a schedule is read off at this depth, so it has to clear the sample range
        assert isinstance(far_diameter, int) and far_diameter >= 20, (
            "`far_diameter` has to be an integer not less than 20"
        )
        self.far_diameter = far_diameter

    @classmethod
    def from_env(cls, **overrides) -> "Config":
        """
        Build config from `CLASSICAL_DRG_*` environment variables (a `.env` file is honoured),
        explicit keyword arguments win over the environment
        """
        load_dotenv()
        settings = {}
        for name in _FLOAT_FIELDS:
            value = os.getenv(ENV_PREFIX + name.upper())
            if value is not None:
                settings[name] = float(value)
        for name in _INT_FIELDS:
            value = os.getenv(ENV_PREFIX + name.upper())
            if value is not None:
                settings[name] = int(value)
        fmt = os.getenv(ENV_PREFIX + "FORMAT")
        if fmt is not None:
            settings["fmt"] = fmt
        settings.update({key: value for key, value in overrides.items() if value is not None})
        return cls(**settings)

    def replace(self, **changes) -> "Config":
        settings = dict(vars(self))
        settings.update({key: value for key, value in changes.items() if value is not None})
        return self.__class__(**settings)


_config: typing.Optional[Config] = None


def get_global_config() -> Config:
    global _config
    if _config is None:
        _config = Config()
    return _config


def set_global_config(config: typing.Optional[Config]) -> None:
    global _config
    _config = config
