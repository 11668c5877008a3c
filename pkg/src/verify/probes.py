"""Containment probes for q-pseudoconvexity: hat fills and Hartogs figures.

Both probes look for a constructive counterexample. A violation is certain; a
consistent verdict only means no counterexample was sampled.
"""

import logging

import numpy as np

from src.config import get_settings
from src.core import sampling
from src.core.geometry import AffineMap, to_real
from src.errors import OrderError
from src.hats.figures import HartogsFigure
from src.hats.pairs import HatPair
from src.hats.sampling import sample_filled, sample_S
from src.schemas.reports import Verdict
from src.verify.domains import DomainSpec

logger = logging.getLogger(__name__)


def _first_outside(omega: DomainSpec, points: np.ndarray) -> tuple[int, list[float] | None]:
    outside = ~omega.contains(points)
    if not outside.any():
        return 0, None
    return int(np.count_nonzero(outside)), points[np.argmax(outside)].tolist()


def hat_fill_probe(
    omega: DomainSpec,
    pair: HatPair,
    q: int,
    surface_samples: int | None = None,
    filled_samples: int | None = None,
    seed: int = 0,
) -> Verdict:
    """If Omega contains the sampled hat S, look for filled-hat samples outside Omega.

    Args:
        omega (DomainSpec): Domain under test
        pair (HatPair): Hat pair of order n - q + 1
        q (int): Pseudoconvexity order tested
        surface_samples (int | None, optional): Samples of S. Defaults to settings.
        filled_samples (int | None, optional): Samples of the filled hat. Defaults to settings.
        seed (int, optional): Sampler seed. Defaults to 0.

    Returns:
        Verdict: "violation" with the first filled sample outside Omega, else "consistent"

    Raises:
        OrderError: If the pair's order is not n - q + 1
    """
    if pair.k != pair.n - q + 1:
        raise OrderError(f"hat order {pair.k} does not match n - q + 1 = {pair.n - q + 1}")
    settings = get_settings()
    surface_samples = surface_samples or settings.surface_samples
    filled_samples = filled_samples or settings.filled_samples
    params = {"pair": pair.label, "q": q, "surface_samples": surface_samples, "seed": seed}

    escaped, _ = _first_outside(omega, sample_S(pair, surface_samples, seed))
    if escaped:
        return Verdict(
            probe="hat_fill",
            params=params,
            verdict="consistent",
            margins={"surface_outside": float(escaped)},
            note="hat surface leaves the domain; nothing to test",
        )
    filled = sample_filled(pair, filled_samples, seed + 1)
    missing, witness = _first_outside(omega, filled)
    params["filled_samples"] = filled_samples
    if witness is None:
        return Verdict(probe="hat_fill", params=params, verdict="consistent")
    logger.info("Hat %s: %d filled samples leave %s", pair.label, missing, omega.name)
    return Verdict(
        probe="hat_fill",
        params=params,
        verdict="violation",
        witness=witness,
        margins={"filled_outside": float(missing)},
    )


def hartogs_probe(
    omega: DomainSpec,
    fig: HartogsFigure,
    embed: AffineMap,
    q: int,
    samples: int | None = None,
    seed: int = 0,
) -> Verdict:
    """If Omega contains the image of the figure, look for polydisc images outside it.

    Raises:
        OrderError: If the figure is not of type (q, n - q)
    """
    if fig.k != q or fig.n != embed.dimension or fig.m != embed.dimension - q:
        raise OrderError(f"figure ({fig.k}, {fig.m}) is not of type (q, n - q) for q={q}")
    samples = samples or get_settings().filled_samples
    params = {"q": q, "r": fig.r, "s": fig.s, "samples": samples, "seed": seed}

    image = to_real(embed.forward_complex(fig.sample(samples, seed)))
    escaped, _ = _first_outside(omega, image)
    if escaped:
        return Verdict(
            probe="hartogs",
            params=params,
            verdict="consistent",
            margins={"figure_outside": float(escaped)},
            note="figure leaves the domain; nothing to test",
        )
    polydisc = to_real(embed.forward_complex(sampling.polydisc(fig.n, samples, seed + 7)))
    missing, witness = _first_outside(omega, polydisc)
    if witness is None:
        return Verdict(probe="hartogs", params=params, verdict="consistent")
    logger.info("Hartogs figure: %d polydisc samples leave %s", missing, omega.name)
    return Verdict(
        probe="hartogs",
        params=params,
        verdict="violation",
        witness=witness,
        margins={"polydisc_outside": float(missing)},
    )
