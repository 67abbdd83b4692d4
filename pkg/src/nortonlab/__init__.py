"""nortonlab: Bose-Mesner / Norton-algebra certification for Q-polynomial
distance-regular graphs.

Modules: graphcore (graphs, distance-regularity), families (named family
constructors and closed forms), spectral (eigenstructure, Krein parameters,
Q-polynomial orderings), kites (kite statistics, reinforcement), norton
(Norton product, balance hierarchy), phidc (parameter pipeline, DC), cli.
"""

__version__ = "0.1.0"
