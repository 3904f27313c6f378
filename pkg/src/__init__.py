"""ergolab: ergodic averages, decompositions and tameness checks."""
