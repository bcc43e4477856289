"""Computational toolkit for Sidki's weak-commutativity groups X(G).

Subpackages by concern:

* :mod:`xcomm.words` -- free-group words over the doubled alphabet.
* :mod:`xcomm.presentations` -- the finite relator schedule and presentations
  of X(F_m) and X(G), plus exporters.
* :mod:`xcomm.certify` -- machine-checkable derivations of box relators from
  the finite base set.
* :mod:`xcomm.homs` -- the structural homomorphisms rho, nu-adjacent kernels
  L, D, W and the image Q.
* :mod:`xcomm.lomodule` -- arithmetic in ZF/I_2(F) and the wreath
  representation.
* :mod:`xcomm.abelian` -- integer Smith normal form and abelianization.
* :mod:`xcomm.quotients` -- verification of presentations inside small
  permutation groups.
"""

__version__ = "0.1.0"
