# Curves, extension towers and Riemann-Roch bases
