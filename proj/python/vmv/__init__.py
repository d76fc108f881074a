"""Vehicle model validity toolkit.

Python bindings over the C++ core: tire and vehicle models, a synthetic
ground-truth plant, one-step model validity analysis and model-based EKF
observers.
"""

from ._core import (  # noqa: F401
    Accel,
    BicycleState,
    BicycleStep,
    ControlInput,
    DugoffTire,
    ForcePair,
    FourWheelState,
    FourWheelStep,
    GroundTruthFrame,
    LinearTire,
    ManeuverKind,
    ManeuverSpec,
    ModelId,
    ModelStep,
    NoiseConfig,
    ObserverEstimate,
    ObserverRun,
    PacejkaChannel,
    PacejkaTire,
    SensorFrame,
    StateVec3,
    StepError,
    TireSet,
    Trajectory,
    VehicleParams,
    WheelLoads,
    __version__,
    compare_trajectory,
    covariance_from_errors,
    default_tires,
    default_vehicle,
    magic_formula,
    model_measurement,
    model_step,
    pacejka_force,
    read_trajectory,
    rollout_model,
    run_observer,
    simulate_maneuver,
    slip_ratio,
    step_bicycle,
    step_four_wheel,
    tire_for_model,
    tire_force_dugoff,
    tire_force_linear,
    tire_force_pacejka,
    tire_to_body,
    vehicle_preset,
    vertical_forces,
    write_trajectory,
)
