"""
One function per CLI subcommand. Each takes a validated RunConfig, writes its
files into the output directory and returns their paths.
"""
import logging
import math

from lib.caustic_algebra.caustic_polynomial import CausticPolynomialSystem, f1f2_curves, joint_root_scan
from lib.dispersion.caustics import find_caustics
from lib.dispersion.dispersion_relation import dispersion_profile, group_velocity_curvature
from lib.errors import (
    ConfigError,
    DegenerateAmplificationError,
    DegenerateCausticError,
    DomainError,
    DomainTooSmallError,
    InfiniteLifetimeError,
    InstabilityError,
)
from lib.output.csv_output import CsvOutput
from lib.report.discrepancy import build_discrepancy_report
from lib.scheme_synthesis.drp_scheme import integrated_error, synthesize_drp, wavenumber_slope
from lib.wavepacket.fd_simulation import simulate_two_packets
from lib.wavepacket.lifetime import caustic_lifetime, lifetime_second_order
from lib.wavepacket.packets import caustic_rays, linf_history, residual_energy_grid

logger = logging.getLogger(__name__)

EXIT_CODES = {"ok": 0, "internal": 1, "config": 2, "io": 3, "numerical": 4}


def _caustic_report(cfg, coeffs):
    return find_caustics(coeffs, cfg.grid, cfg.dispersion_backend, scan_points=cfg.scan_points,
                         bisect_tol=cfg.bisect_tol, classify_step=cfg.classify_step)


def cmd_synth(cfg, tqdm_flag=False):
    coeffs = synthesize_drp(cfg.m)
    logger.info(
        f"m={cfg.m}: gamma={list(coeffs.gamma)}, integrated error {integrated_error(coeffs):.6e}, "
        f"slope at phi=0 {wavenumber_slope(coeffs):.6f}"
    )
    return [CsvOutput(cfg.out_dir).write_coefficients(coeffs)]


def cmd_dispersion(cfg, tqdm_flag=False):
    coeffs = synthesize_drp(cfg.m)
    profile = dispersion_profile(coeffs, cfg.grid, cfg.dispersion_backend, cfg.phi_samples)
    return [CsvOutput(cfg.out_dir).write_dispersion_profile(profile)]


def cmd_caustics(cfg, tqdm_flag=False):
    coeffs = synthesize_drp(cfg.m)
    out = CsvOutput(cfg.out_dir)
    report = _caustic_report(cfg, coeffs)
    system = CausticPolynomialSystem(coeffs, cfg.sigma, cfg.c, theta_samples=cfg.theta_samples)
    return [
        out.write_caustic_report(report),
        out.write_f1f2_curves(f1f2_curves(system)),
        out.write_joint_roots(joint_root_scan(system, tol=cfg.joint_tol)),
    ]


def _lifetimes(cfg, coeffs, model):
    p1, p2 = model.packet1, model.packet2
    estimates = {"packet_length_definition": "l = 1 / sqrt(alpha)"}
    try:
        first = caustic_lifetime(p1.length, p2.length, p1.v, p2.v)
        estimates["t_star"] = float(first.t_star)
    except InfiniteLifetimeError:
        estimates["t_star"] = math.inf
    try:
        d2vg = float(group_velocity_curvature(coeffs, cfg.grid, cfg.dispersion_backend, cfg.carrier_phi_c))
        second = lifetime_second_order(p1.length, p2.length, cfg.delta_k, d2vg)
        estimates["t_star_second_order"] = float(second.t_star)
        estimates["d2vg"] = d2vg
    except DegenerateCausticError:
        estimates["t_star_second_order"] = math.inf
    return estimates


def cmd_errormodel(cfg, tqdm_flag=False):
    coeffs = synthesize_drp(cfg.m)
    model = cfg.error_model()
    out = CsvOutput(cfg.out_dir)
    history = linf_history(model, tqdm_flag=tqdm_flag)
    field = residual_energy_grid(model, tqdm_flag=tqdm_flag)
    rays = caustic_rays(_caustic_report(cfg, coeffs), field.t)
    tail = history.linf[int(math.floor(0.9 * len(history.linf))):]
    metadata = {
        "config": cfg.to_dict(),
        "geometry": model.to_dict(),
        "residual_energy_definition": "0.5 * E^2",
        "linf_max": float(history.linf.max()),
        "linf_late_mean": float(tail.mean()),
        "lifetime": _lifetimes(cfg, coeffs, model),
    }
    return [
        out.write_error_history(history),
        out.write_field_grid(field),
        out.write_caustic_rays(rays),
        out.write_metadata(metadata, "errormodel_metadata.yaml"),
    ]


def cmd_simulate(cfg, tqdm_flag=False):
    coeffs = synthesize_drp(cfg.m)
    model = cfg.error_model()
    packets = (model.packet1, model.packet2)
    result = simulate_two_packets(packets, coeffs, cfg.grid, cfg.dispersion_backend, cfg.sim_nx,
                                  cfg.steps, growth_cap=cfg.growth_cap, tqdm_flag=tqdm_flag)
    out = CsvOutput(cfg.out_dir)
    metadata = {
        "config": cfg.to_dict(),
        "packets": [dict(vars(p)) for p in packets],
        "period": float(cfg.sim_nx * cfg.h),
        "tau": float(cfg.grid.tau),
        "model_speeds": [result.v1, result.v2],
        "max_growth": float(result.max_growth),
        "final_linf_simulation": float(result.linf_simulation[-1]),
        "final_linf_model": float(result.linf_model[-1]),
    }
    return [out.write_simulation_error(result), out.write_metadata(metadata, "simulation_metadata.yaml")]


def cmd_discrepancy(cfg, tqdm_flag=False):
    records = build_discrepancy_report(cfg, tqdm_flag=tqdm_flag)
    return [CsvOutput(cfg.out_dir).write_discrepancy(records)]


COMMAND_TABLE = {
    "synth": cmd_synth,
    "dispersion": cmd_dispersion,
    "caustics": cmd_caustics,
    "simulate": cmd_simulate,
    "errormodel": cmd_errormodel,
    "discrepancy": cmd_discrepancy,
}


def exit_code_for(error):
    if isinstance(error, (ConfigError, DomainError, DomainTooSmallError)):
        return EXIT_CODES["config"]
    if isinstance(error, OSError):
        return EXIT_CODES["io"]
    if isinstance(error, (InstabilityError, DegenerateAmplificationError, DegenerateCausticError,
                          InfiniteLifetimeError, FloatingPointError)):
        return EXIT_CODES["numerical"]
    return EXIT_CODES["internal"]


def run_command(name, cfg, tqdm_flag=False):
    """Run one subcommand and map its outcome onto an exit code."""
    try:
        written = COMMAND_TABLE[name](cfg, tqdm_flag=tqdm_flag)
    except Exception as e:
        code = exit_code_for(e)
        if code == EXIT_CODES["internal"]:
            logger.exception(f"{name} failed")
        else:
            logger.error(f"{name} failed: {e}")
        return code
    logger.info(f"{name}: {len(written)} file(s) written to {cfg.out_dir}")
    return EXIT_CODES["ok"]
