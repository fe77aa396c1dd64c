# Finite field arithmetic and base-case transforms
