"""Oracle-free adiabatic quantum database search.

Encode a sorted key-value table into a diagonal Hamiltonian, evolve under
the interpolating Hamiltonian (continuous, exact discrete, or second-order
split steps), analyze the spectrum and gap, and compile the two-qubit
instance to an NMR pulse sequence.

Heavy imports stay in the submodules; import what you need from
``adiasearch.database``, ``adiasearch.operators``, ``adiasearch.evolve``,
``adiasearch.spectrum``, or ``adiasearch.nmr``.
"""

__version__ = "0.1.0"
