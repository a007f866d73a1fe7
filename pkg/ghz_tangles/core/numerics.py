NORM_TOL = 1e-12
HERMITIAN_TOL = 1e-12
EIGEN_HERMITIAN_TOL = 1e-10
PSD_TOL = 1e-10
DET_TOL = 1e-12
RANK_TOL = 1e-9
SUPPORT_TOL = 1e-9

MAX_QUBITS = 12
MAX_TANGLE_QUBITS = 6
