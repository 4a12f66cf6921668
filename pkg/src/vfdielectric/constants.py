"""Physical-constant registry: load, validate, serve and serialize.

The registry is populated from a JSON data file: a list of records, each
``{"key", "value", "unit", "source"}`` with the unit drawn from a fixed
whitelist.  Records with ``"kind": "species"`` are passed through untouched
for the species module to interpret.  Values are converted to SI base units
at ingestion (eV-family energies via the elementary charge from the same
file); the original file value/unit are kept so a set serializes back to an
equivalent file.

Resolution order for the data file: explicit path argument, then the
``VACUUM_DATA_DIR`` environment variable (``constants.json`` inside it), then
the bundled default.
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

from .quantity import (
    ACTION,
    CHARGE,
    DIMENSIONLESS,
    ENERGY,
    FREQUENCY,
    MASS,
    PERMEABILITY,
    PERMITTIVITY,
    SPEED,
    Dimension,
    Quantity,
)

__all__ = [
    "ConstantsError",
    "ConstantRecord",
    "ConstantsSet",
    "load_constants",
    "get_constant",
    "serialize_constants",
    "DATA_DIR_ENV_VAR",
    "REQUIRED_KEYS",
]

DATA_DIR_ENV_VAR = "VACUUM_DATA_DIR"
DATA_FILENAME = "constants.json"

# unit whitelist for the data file -> SI dimension of the stored quantity
UNIT_DIMENSIONS: dict[str, Dimension] = {
    "C": CHARGE,
    "J·s": ACTION,
    "H/m": PERMEABILITY,
    "kg": MASS,
    "m/s": SPEED,
    "F/m": PERMITTIVITY,
    "dimensionless": DIMENSIONLESS,
    "eV": ENERGY,
    "keV": ENERGY,
    "GeV": ENERGY,
    "1/s": FREQUENCY,
}

_EV_MULTIPLES = {"eV": 1.0, "keV": 1e3, "GeV": 1e9}

REQUIRED_KEYS: dict[str, Dimension] = {
    "e": CHARGE,
    "hbar": ACTION,
    "mu0": PERMEABILITY,
    "m_e": MASS,
    "m_mu": MASS,
    "m_tau": MASS,
    "ref_epsilon0": PERMITTIVITY,
    "ref_c": SPEED,
    "ref_inv_alpha": DIMENSIONLESS,
}

# strictly positive by contract: the elementary charge, the action quantum,
# the permeability, and every mass
_POSITIVE_KEYS = {"e", "hbar", "mu0"}


class ConstantsError(ValueError):
    """Raised for unparsable, incomplete or invalid constants data."""


@dataclass(frozen=True)
class ConstantRecord:
    key: str
    quantity: Quantity          # SI base units
    source: str
    file_value: float           # value/unit exactly as read, for round-tripping
    file_unit: str


@dataclass(frozen=True)
class ConstantsSet:
    records: dict[str, ConstantRecord]
    origin: str
    species_records: tuple[dict, ...] = field(default_factory=tuple)

    def get(self, key: str) -> Quantity:
        return get_constant(self, key)

    def record(self, key: str) -> ConstantRecord:
        try:
            return self.records[key]
        except KeyError:
            raise KeyError(f"unknown constant {key!r} (loaded from {self.origin})") from None

    def __contains__(self, key: str) -> bool:
        return key in self.records

    def keys(self):
        return self.records.keys()

    def same_values(self, other: "ConstantsSet") -> bool:
        """Key-by-key equality of quantities, dimensions and sources."""
        if self.records.keys() != other.records.keys():
            return False
        for key, rec in self.records.items():
            o = other.records[key]
            if rec.quantity != o.quantity or rec.source != o.source:
                return False
        return self.species_records == other.species_records


def get_constant(constants: ConstantsSet, key: str) -> Quantity:
    """The stored SI quantity for ``key``; KeyError for unknown keys."""
    return constants.record(key).quantity


def _bundled_text() -> str:
    return resources.files(__package__).joinpath(f"data/{DATA_FILENAME}").read_text("utf-8")


def _resolve_source(path: str | Path | None) -> tuple[str, str]:
    """Return (json text, origin label) honoring path arg and env var."""
    if path is not None:
        p = Path(path)
        try:
            return p.read_text("utf-8"), str(p)
        except OSError as exc:
            raise ConstantsError(f"cannot read constants file {p}: {exc}") from exc
    env_dir = os.environ.get(DATA_DIR_ENV_VAR)
    if env_dir:
        p = Path(env_dir) / DATA_FILENAME
        try:
            return p.read_text("utf-8"), str(p)
        except OSError as exc:
            raise ConstantsError(
                f"cannot read constants file {p} (from ${DATA_DIR_ENV_VAR}): {exc}"
            ) from exc
    return _bundled_text(), "built-in default"


def load_constants(path: str | Path | None = None) -> ConstantsSet:
    """Load and validate a constants registry.

    Raises :class:`ConstantsError` on parse failure, missing required keys,
    wrong dimensions for required keys, or non-positive values where
    positivity is required.
    """
    text, origin = _resolve_source(path)
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConstantsError(f"constants file {origin} is not valid JSON: {exc}") from exc
    if not isinstance(raw, list):
        raise ConstantsError(f"constants file {origin} must be a JSON array of records")

    constant_rows = []
    species_rows = []
    for row in raw:
        if not isinstance(row, dict):
            raise ConstantsError(f"non-object record in {origin}: {row!r}")
        if row.get("kind") == "species":
            species_rows.append(row)
        else:
            constant_rows.append(row)

    # The elementary charge anchors eV -> J scaling, so find it first.
    joules_per_ev = None
    for row in constant_rows:
        if row.get("key") == "e" and row.get("unit") == "C":
            joules_per_ev = float(row["value"])

    records: dict[str, ConstantRecord] = {}
    for row in constant_rows:
        try:
            key = row["key"]
            value = float(row["value"])
            unit = row["unit"]
            source = str(row.get("source", ""))
        except (KeyError, TypeError, ValueError) as exc:
            raise ConstantsError(f"malformed record in {origin}: {row!r} ({exc})") from exc
        if unit not in UNIT_DIMENSIONS:
            raise ConstantsError(
                f"record {key!r} in {origin} uses unit {unit!r}; "
                f"allowed: {sorted(UNIT_DIMENSIONS)}"
            )
        if key in records:
            raise ConstantsError(f"duplicate key {key!r} in {origin}")
        si_value = value
        if unit in _EV_MULTIPLES:
            if joules_per_ev is None:
                raise ConstantsError(
                    f"record {key!r} in {origin} uses {unit} but the file has no "
                    "elementary-charge record 'e' (unit C) to scale by"
                )
            si_value = value * _EV_MULTIPLES[unit] * joules_per_ev
        try:
            quantity = Quantity(si_value, UNIT_DIMENSIONS[unit])
        except ValueError as exc:
            raise ConstantsError(f"record {key!r} in {origin}: {exc}") from exc
        records[key] = ConstantRecord(key, quantity, source, value, unit)

    missing = sorted(set(REQUIRED_KEYS) - set(records))
    if missing:
        raise ConstantsError(f"constants file {origin} is missing required keys: {missing}")

    for key, expected in REQUIRED_KEYS.items():
        got = records[key].quantity.dim
        if got != expected:
            raise ConstantsError(
                f"constant {key!r} in {origin} must have dimension {expected}, got {got}"
            )

    for key, rec in records.items():
        must_be_positive = key in _POSITIVE_KEYS or rec.quantity.dim == MASS
        if must_be_positive and rec.quantity.value <= 0:
            raise ConstantsError(
                f"constant {key!r} in {origin} must be strictly positive, "
                f"got {rec.quantity.value!r}"
            )

    return ConstantsSet(records=records, origin=origin, species_records=tuple(species_rows))


def serialize_constants(constants: ConstantsSet) -> str:
    """Serialize back to the data-file format (original values and units)."""
    rows: list[dict] = [
        {
            "key": rec.key,
            "value": rec.file_value,
            "unit": rec.file_unit,
            "source": rec.source,
        }
        for rec in constants.records.values()
    ]
    rows.extend(dict(row) for row in constants.species_records)
    return json.dumps(rows, ensure_ascii=False, indent=2)
