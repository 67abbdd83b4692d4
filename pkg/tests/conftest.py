import numpy as np
import pytest

from nortonlab.families import catalogue_by_key, construct, family_data
from nortonlab.graphcore import build_drgraph
from nortonlab.norton import evectors
from nortonlab.spectral import analyze_spectrum


class Bundle:
    """Memoized per-family analysis artifacts shared across the suite."""

    def __init__(self, key):
        self.key = key
        self.spec = catalogue_by_key()[key]
        self.graph = construct(self.spec)
        self.dr = build_drgraph(self.graph)
        self.fd = family_data(self.spec)
        self.sd = analyze_spectrum(self.dr)
        self._evs = {}

    def sigma_for(self, label="principal"):
        st = self.structure(label)
        for sig in self.sd.qpoly_orderings:
            if np.allclose(self.sd.theta_seq(sig), st.theta, rtol=1e-9, atol=1e-9):
                return sig
        raise AssertionError(f"no Q-poly ordering matches structure {label} of {self.key}")

    def structure(self, label="principal"):
        for st in self.fd.structures:
            if st.label == label:
                return st
        raise KeyError(label)

    def ev(self, label="principal"):
        if label not in self._evs:
            self._evs[label] = evectors(self.dr, self.sd, self.sigma_for(label))
        return self._evs[label]


_CACHE = {}


@pytest.fixture(scope="session")
def bundle():
    def get(key) -> Bundle:
        if key not in _CACHE:
            _CACHE[key] = Bundle(key)
        return _CACHE[key]

    return get
