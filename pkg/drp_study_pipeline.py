import os
import sys

from dagster import Failure, get_dagster_logger, job, op, repository

sys.path.insert(0, os.path.join(os.path.dirname(os.path.abspath(__file__)), "src"))

from lib.commands import EXIT_CODES, run_command  # noqa: E402
from lib.run_config import default_config, load_config  # noqa: E402


@op(
    config_schema={
        "CONFIG_FILE": str,
        "OUT_FOLDER": str,
    }
)
def load_envs(context) -> dict:
    config = {
        "CONFIG_FILE": context.op_config["CONFIG_FILE"],
        "OUT_FOLDER": context.op_config["OUT_FOLDER"],
    }
    return config


def _run_step(name, env_values):
    logger = get_dagster_logger()
    cfg = load_config(env_values["CONFIG_FILE"]) if env_values["CONFIG_FILE"] else default_config()
    cfg = cfg.with_overrides(out_dir=os.path.join(env_values["OUT_FOLDER"], name))
    logger.info("STEP: {} -> {}".format(name, cfg.out_dir))
    code = run_command(name, cfg)
    if code != EXIT_CODES["ok"]:
        raise Failure(description="{} exited with status {}".format(name, code))
    return cfg.out_dir


@op
def synthesize(env_values: dict) -> str:
    return _run_step("synth", env_values)


@op
def analyze_dispersion(env_values: dict, previous: str) -> str:
    return _run_step("dispersion", env_values)


@op
def detect_caustics(env_values: dict, previous: str) -> str:
    return _run_step("caustics", env_values)


@op
def error_model(env_values: dict, previous: str) -> str:
    return _run_step("errormodel", env_values)


@op
def discrepancy(env_values: dict, previous: str) -> str:
    return _run_step("discrepancy", env_values)


@op
def list_outputs(env_values: dict, previous: str) -> list:
    logger = get_dagster_logger()
    written = []
    for dirpath, _, filenames in sorted(os.walk(env_values["OUT_FOLDER"])):
        for filename in sorted(filenames):
            filepath = os.path.join(dirpath, filename)
            logger.info("FILE: {}".format(filepath))
            written.append(filepath)
    return written


@job
def drp_study_pipeline():
    env_values = load_envs()
    result = synthesize(env_values)
    result = analyze_dispersion(env_values, result)
    result = detect_caustics(env_values, result)
    result = error_model(env_values, result)
    result = discrepancy(env_values, result)
    list_outputs(env_values, result)


@repository
def drp_study_repository():
    return [drp_study_pipeline]
