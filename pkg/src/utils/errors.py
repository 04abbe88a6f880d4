"""
Exception Hierarchy Module
"""

from typing import Optional


class MachineSimulationError(Exception):
    """Base class for every error raised by the simulator"""

    exit_code = 1


# ---------------------------------------------------------------------------
# Scenario schema errors (exit 2)
# ---------------------------------------------------------------------------

class ScenarioSchemaError(MachineSimulationError):
    """Scenario file does not match the expected schema"""

    exit_code = 2

    def __init__(self, message: str, field_path: Optional[str] = None):
        self.field_path = field_path
        if field_path:
            message = f"{field_path}: {message}"
        super().__init__(message)


# ---------------------------------------------------------------------------
# Physics validity errors (exit 3)
# ---------------------------------------------------------------------------

class PhysicsError(MachineSimulationError):
    """Input is outside the physical domain of a formula"""

    exit_code = 3


class HermiticityError(PhysicsError):
    """Operator is not Hermitian within tolerance"""


class ShapeError(PhysicsError):
    """Operator dimensions do not match"""


class DegenerateTemperatureError(PhysicsError):
    """Temperature of zero passed where a finite temperature is required"""


class StateError(PhysicsError):
    """Matrix is not a valid density matrix"""


class DomainError(PhysicsError):
    """Parameter outside the admissible range"""


class TruncationError(PhysicsError):
    """Fock truncation too small for the requested state"""


class UndefinedTemperatureError(PhysicsError):
    """Apparent temperature is not defined for this state"""


class BathModelError(PhysicsError):
    """Bath spectral density is inconsistent or leaks heat"""


class TrivialExtractionError(PhysicsError):
    """Apparent temperature below the cold bath: extraction is trivial"""


class DegenerateSteadyStateError(PhysicsError):
    """Steady-state apparent temperature is undefined"""


class RegimeError(PhysicsError):
    """Formula requested outside its operating regime"""


class UnsupportedBatteryError(PhysicsError):
    """Battery has more than one transition frequency"""


class ValidityError(PhysicsError):
    """Quasi-steady rates outside the weak-coupling regime"""


class OracleSizeError(PhysicsError):
    """Hilbert space too large for the brute-force generator"""


class WeakCouplingError(PhysicsError):
    """Coupling g is not small compared to the battery frequency"""


# ---------------------------------------------------------------------------
# Numerical errors (exit 4)
# ---------------------------------------------------------------------------

class NumericalError(MachineSimulationError):
    """Numerical procedure failed"""

    exit_code = 4


class PositivityError(NumericalError):
    """Density matrix lost positivity during integration"""


class StiffnessError(NumericalError):
    """Integrator step size underflow"""
