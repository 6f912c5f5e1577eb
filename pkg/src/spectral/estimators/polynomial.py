from dataclasses import dataclass
import re
from typing import Dict, Tuple

import numpy as np

from src.spectral.errors import ConfigError

Exponents = Tuple[int, int, int]

LINEAR_TERMS: Tuple[Exponents, ...] = ((1, 0, 0), (0, 1, 0), (0, 0, 1))
_CHANNELS = 'RGB'
_TERM_PATTERN = re.compile(r'([RGB])(\d*)')


@dataclass(frozen=True)
class PolyCombo:
    """Ordered monomials over (R, G, B); the first three are always R, G, B"""
    terms: Tuple[Exponents, ...]

    def __post_init__(self):
        terms = tuple(tuple(int(e) for e in term) for term in self.terms)
        if len(terms) < 3 or terms[:3] != LINEAR_TERMS:
            raise ValueError(f"A combo must start with the linear terms R, G, B, got {terms}")
        for term in terms:
            if len(term) != 3 or any(e < 0 or e > 255 for e in term) or sum(term) == 0:
                raise ValueError(f"Invalid exponent triple {term}")
        if len(set(terms)) != len(terms):
            raise ValueError(f"Duplicate terms in combo {terms}")
        object.__setattr__(self, 'terms', terms)

    @property
    def size(self) -> int:
        return len(self.terms)

    @property
    def is_linear(self) -> bool:
        return self.terms == LINEAR_TERMS

    def names(self) -> Tuple[str, ...]:
        return tuple(term_name(term) for term in self.terms)

    def __str__(self) -> str:
        return ','.join(self.names())


def term_name(term: Exponents) -> str:
    parts = []
    for channel, exponent in zip(_CHANNELS, term):
        if exponent == 1:
            parts.append(channel)
        elif exponent > 1:
            parts.append(f"{channel}{exponent}")
    return ''.join(parts)


def parse_term(text: str) -> Exponents:
    """'RG2' -> (1, 2, 0); a channel may appear once"""
    text = text.strip().upper()
    if not text or _TERM_PATTERN.sub('', text):
        raise ConfigError(f"Cannot parse polynomial term '{text}'")
    exponents = [0, 0, 0]
    for channel, power in _TERM_PATTERN.findall(text):
        index = _CHANNELS.index(channel)
        if exponents[index]:
            raise ConfigError(f"Channel {channel} repeated in term '{text}'")
        exponents[index] = int(power) if power else 1
    return tuple(exponents)


def parse_combo_terms(text: str) -> PolyCombo:
    """Comma separated term list such as 'R,G,B,R2,G2,B2'"""
    terms = tuple(parse_term(part) for part in text.split(',') if part.strip())
    try:
        return PolyCombo(terms)
    except ValueError as e:
        raise ConfigError(str(e))


def _preset(spec: str) -> PolyCombo:
    return parse_combo_terms(spec)


COMBO_PRESETS: Dict[str, PolyCombo] = {
    'linear3': _preset('R,G,B'),
    'cross6': _preset('R,G,B,RG,GB,BR'),
    'sq6': _preset('R,G,B,R2,G2,B2'),
    'cube6': _preset('R,G,B,R3,G3,B3'),
    'mixed6': _preset('R,G,B,RG2,GB2,BR2'),
    'cross7': _preset('R,G,B,RG,GB,BR,R2G2B2'),
    'cross9': _preset('R,G,B,RG,GB,BR,RG2,GB2,BR2'),
    'full12': _preset('R,G,B,RG,GB,BR,R2,G2,B2,RG2,GB2,BR2'),
    'full12sq': _preset('R,G,B,RG,GB,BR,R2,G2,B2,R2G2,G2B2,B2R2'),
}

LINEAR3 = COMBO_PRESETS['linear3']


def combo_from_name(name: str) -> PolyCombo:
    try:
        return COMBO_PRESETS[name]
    except KeyError:
        raise ConfigError(f"Unknown combo '{name}', expected one of {sorted(COMBO_PRESETS)}")


def expand_polynomial(rgb: np.ndarray, combo: PolyCombo) -> np.ndarray:
    """Evaluate every monomial of ``combo``; works on (3,) or (..., 3) input"""
    rgb = np.asarray(rgb, dtype=np.float64)
    if rgb.shape[-1] != 3:
        raise ValueError(f"Expected a trailing axis of length 3, got {rgb.shape}")
    exponents = np.asarray(combo.terms, dtype=np.float64)
    # integer powers via prod keeps 0**0 == 1 exact
    return np.prod(rgb[..., np.newaxis, :] ** exponents, axis=-1)


def expand_responses(responses: np.ndarray, combo: PolyCombo) -> np.ndarray:
    """Expand an M x k response matrix (M == 3) into the T x k feature matrix"""
    responses = np.asarray(responses, dtype=np.float64)
    if responses.shape[0] != 3:
        raise ValueError(f"Polynomial expansion needs 3-channel responses, got {responses.shape[0]}")
    if combo.is_linear:
        return responses
    return expand_polynomial(responses.T, combo).T


def combo_is_subset(small: PolyCombo, large: PolyCombo) -> bool:
    return set(small.terms) <= set(large.terms)


