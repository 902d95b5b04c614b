"""areaflow: a numerical laboratory for the monotone quantity of
area-decreasing graphical mean curvature flow.

Submodules
----------
geometry   closed-form curvature models (spheres, CP^n, HP^n, flat tori)
svcore     singular-value spectra, the pair operator S^[2], and Phi
verifier   scalar reference checks of the evolution identities/inequalities
campaigns  vectorized seeded verification campaigns
criteria   homotopy-triviality criteria and the dilation trick
flowsim    desk-scale graphical mean curvature flow backends
cli        command-line entry point
"""

__version__ = "0.1.0"
