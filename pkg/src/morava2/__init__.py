"""Computer algebra for the height-2 Morava stabilizer group at the prime 3.

The package recomputes, from first principles, the arithmetic of the maximal
order of the quaternionic division algebra over Q_3, the action of stabilizer
group elements on the Lubin-Tate deformation ring, the first differential of
the algebraic spectral sequence built from the length-3 permutation
resolution, and the rule-driven page bookkeeping down to the E_infinity term
of the Adams-Novikov spectral sequence for the K(2)-local mod-3 Moore
spectrum, with chart output.
"""

__version__ = "0.1.0"
