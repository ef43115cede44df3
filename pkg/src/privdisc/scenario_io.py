"""Scenario file parsing and serialization.

Scenario files are JSON with a ``format_version`` and exactly one of two
bodies: ``explicit`` (support outcomes, dataset law, latent channel) or
``generative`` (latent pmf, observation channel, sample count, expanded via
conditionally iid observations).  Probabilities may be JSON numbers or
strings like ``"1/12"`` / ``"0.1"``; string and integer literals are kept
as exact rationals so the exact verification path can use them.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path

import numpy as np

from .errors import ScenarioFormatError
from .probability import Channel, DiscreteScenario, Pmf, build_observation_scenario

FORMAT_VERSION = 1

__all__ = [
    "FORMAT_VERSION",
    "ScenarioFile",
    "parse_scenario_file",
    "parse_scenario_text",
    "serialize_scenario_file",
    "scenarios_equal",
    "parse_mapping_file",
]


@dataclass(frozen=True)
class ScenarioFile:
    """Parsed scenario file: raw body, kind, and the realized scenario."""

    format_version: int
    kind: str  # "explicit" | "generative"
    body: dict
    scenario: DiscreteScenario


def _parse_value(v) -> tuple[float, Fraction | None]:
    """Return (float value, exact rational or None)."""
    if isinstance(v, bool):
        raise ScenarioFormatError(f"boolean {v!r} is not a probability")
    if isinstance(v, int):
        return float(v), Fraction(v)
    if isinstance(v, float):
        return v, None
    if isinstance(v, str):
        try:
            frac = Fraction(v)
        except (ValueError, ZeroDivisionError) as exc:
            raise ScenarioFormatError(f"cannot parse probability {v!r}") from exc
        return float(frac), frac
    raise ScenarioFormatError(f"unsupported probability literal {v!r}")


def _parse_vector(values) -> tuple[list[float], list[Fraction] | None]:
    if not isinstance(values, list) or not values:
        raise ScenarioFormatError("expected a nonempty list of probabilities")
    floats, fracs = [], []
    for v in values:
        f, frac = _parse_value(v)
        floats.append(f)
        fracs.append(frac)
    exact = None if any(f is None for f in fracs) else fracs
    return floats, exact


def _parse_matrix(rows) -> tuple[np.ndarray, list[list[Fraction]] | None]:
    if not isinstance(rows, list) or not rows:
        raise ScenarioFormatError("expected a nonempty matrix")
    floats, exacts = [], []
    for row in rows:
        f, e = _parse_vector(row)
        floats.append(f)
        exacts.append(e)
    exact = None if any(e is None for e in exacts) else exacts
    return np.array(floats), exact


def _explicit_scenario(body: dict) -> DiscreteScenario:
    try:
        alphabets = tuple(int(a) for a in body["sample_alphabets"])
        support = tuple(tuple(int(s) for s in outcome) for outcome in body["support"])
        p_floats, p_exact = _parse_vector(body["p_dataset"])
        latent, _ = _parse_matrix(body["latent_channel"])
    except KeyError as exc:
        raise ScenarioFormatError(f"explicit scenario missing field {exc}") from exc
    if p_exact is not None and sum(p_exact) != 1:
        raise ScenarioFormatError("exact dataset law must sum to exactly 1")
    return DiscreteScenario(
        sample_alphabets=alphabets,
        support=support,
        p_dataset=Pmf(p_floats, atol=1e-9),
        latent_channel=Channel(latent, atol=1e-9),
        latent_alphabet=latent.shape[0],
        exact_p_dataset=tuple(p_exact) if p_exact is not None else None,
    )


def _generative_scenario(body: dict) -> DiscreteScenario:
    try:
        p_floats, p_exact = _parse_vector(body["p_latent"])
        obs_floats, obs_exact = _parse_matrix(body["observation_channel"])
        n = int(body["n"])
    except KeyError as exc:
        raise ScenarioFormatError(f"generative scenario missing field {exc}") from exc
    scenario = build_observation_scenario(Pmf(p_floats, atol=1e-9),
                                          Channel(obs_floats, atol=1e-9), n)
    if p_exact is None or obs_exact is None:
        return scenario
    # Re-derive the dataset law exactly when all inputs are rational.
    exact = []
    for outcome in scenario.support:
        total = Fraction(0)
        for w, pw in enumerate(p_exact):
            mass = pw
            for sym in outcome:
                mass *= obs_exact[sym][w]
            total += mass
        exact.append(total)
    return DiscreteScenario(
        sample_alphabets=scenario.sample_alphabets,
        support=scenario.support,
        p_dataset=scenario.p_dataset,
        latent_channel=scenario.latent_channel,
        latent_alphabet=scenario.latent_alphabet,
        exact_p_dataset=tuple(exact),
    )


def parse_scenario_text(text: str) -> ScenarioFile:
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ScenarioFormatError(f"invalid JSON at line {exc.lineno}: {exc.msg}") from exc
    if not isinstance(obj, dict):
        raise ScenarioFormatError("scenario file must be a JSON object")
    version = obj.get("format_version")
    if version != FORMAT_VERSION:
        raise ScenarioFormatError(f"unsupported format_version {version!r}")
    has_explicit = "explicit" in obj
    has_generative = "generative" in obj
    if has_explicit == has_generative:
        raise ScenarioFormatError(
            "exactly one of 'explicit' or 'generative' must be present")
    if has_explicit:
        return ScenarioFile(version, "explicit", obj["explicit"],
                            _explicit_scenario(obj["explicit"]))
    return ScenarioFile(version, "generative", obj["generative"],
                        _generative_scenario(obj["generative"]))


def parse_scenario_file(path: str | Path) -> ScenarioFile:
    return parse_scenario_text(Path(path).read_text())


def _format_fraction(frac: Fraction) -> str:
    return f"{frac.numerator}/{frac.denominator}" if frac.denominator != 1 \
        else str(frac.numerator)


def serialize_scenario_file(sf: ScenarioFile) -> str:
    """Serialize back to JSON; rationals stay strings, floats stay floats."""
    if sf.kind == "explicit":
        sc = sf.scenario
        if sc.exact_p_dataset is not None:
            p_out = [_format_fraction(v) for v in sc.exact_p_dataset]
        else:
            p_out = [float(v) for v in sc.p_dataset.probs]
        body = {
            "sample_alphabets": list(sc.sample_alphabets),
            "support": [list(outcome) for outcome in sc.support],
            "p_dataset": p_out,
            "latent_channel": [[float(v) for v in row]
                               for row in sc.latent_channel.matrix],
        }
        return json.dumps({"format_version": sf.format_version, "explicit": body},
                          indent=2) + "\n"
    return json.dumps({"format_version": sf.format_version, "generative": sf.body},
                      indent=2) + "\n"


def scenarios_equal(a: DiscreteScenario, b: DiscreteScenario,
                    atol: float = 0.0) -> bool:
    """Structural equality of two scenarios (exact by default)."""
    if (a.sample_alphabets != b.sample_alphabets or a.support != b.support
            or a.latent_alphabet != b.latent_alphabet
            or a.exact_p_dataset != b.exact_p_dataset):
        return False
    if atol == 0.0:
        return (np.array_equal(a.p_dataset.probs, b.p_dataset.probs)
                and np.array_equal(a.latent_channel.matrix, b.latent_channel.matrix))
    return (np.allclose(a.p_dataset.probs, b.p_dataset.probs, atol=atol)
            and np.allclose(a.latent_channel.matrix, b.latent_channel.matrix, atol=atol))


def parse_mapping_file(path: str | Path, p_dataset: Pmf):
    """Load a disclosure mapping; the Bayes inverse is derived when absent."""
    from .engine import DisclosureMapping

    try:
        obj = json.loads(Path(path).read_text())
        p_y_floats, _ = _parse_vector(obj["p_y"])
        cond_y, _ = _parse_matrix(obj["cond_y_given_dataset"])
    except json.JSONDecodeError as exc:
        raise ScenarioFormatError(f"invalid JSON: {exc.msg}") from exc
    except KeyError as exc:
        raise ScenarioFormatError(f"mapping file missing field {exc}") from exc
    if "cond_dataset_given_y" in obj:
        cond_x, _ = _parse_matrix(obj["cond_dataset_given_y"])
    else:
        cond_x = (p_dataset.probs[:, None] * cond_y.T) / np.array(p_y_floats)[None, :]
    return DisclosureMapping(
        p_y=Pmf(p_y_floats, atol=1e-9),
        cond_dataset_given_y=Channel(cond_x, atol=1e-9),
        cond_y_given_dataset=Channel(cond_y, atol=1e-9),
    )
