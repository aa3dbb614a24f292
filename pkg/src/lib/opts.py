import argparse
import logging
import os

from dotmap import DotMap

from lib.run_config import default_config, load_config

COMMANDS = ("synth", "dispersion", "caustics", "simulate", "errormodel", "discrepancy")


def extant_file(fname):
    """
    'Type' for argparse - checks that file exists but does not open.
    """
    if not os.path.exists(fname):
        raise argparse.ArgumentTypeError(f"{fname} does not exist")
    return fname


class opts(object):
    def __init__(self):
        self.parser = argparse.ArgumentParser(
            description="DRP scheme synthesis, dispersion and spurious caustic study"
        )
        self.parser.add_argument("command", choices=COMMANDS, help="study step to run")
        # IO
        self.parser.add_argument(
            "--config",
            type=extant_file,
            default=None,
            help="path to a key = value (or .yaml) configuration file",
        )
        self.parser.add_argument(
            "--out",
            type=str,
            default=None,
            help="output directory (overrides [output] out_dir)",
        )

        # overrides
        self.parser.add_argument(
            "--backend",
            choices=("general", "threepoint"),
            default=None,
            help="dispersion backend",
        )
        self.parser.add_argument("--m", type=int, default=None, help="stencil half-width")
        self.parser.add_argument("--sigma", type=float, default=None, help="Courant number")

        # logging
        self.parser.add_argument(
            "--log_level",
            type=str.upper,
            default="INFO",
            choices=("DEBUG", "INFO", "WARNING", "ERROR"),
            help="logging level",
        )
        self.parser.add_argument("--log_file", type=str, default=None, help="also log to this file")
        self.parser.add_argument("--tqdm", action="store_true", help="show progress bars")

    def parse(self, args=""):
        if args == "":
            opt = self.parser.parse_args()
        else:
            opt = self.parser.parse_args(args)
        return opt

    def init(self, args=""):
        """Parse arguments and merge them with the run configuration into a DotMap."""
        args = self.parse(args)
        config = load_config(args.config) if args.config else default_config()
        config = config.with_overrides(
            m=args.m, sigma=args.sigma, backend=args.backend, out_dir=args.out
        )
        opt = DotMap(config.to_dict())
        for key, value in vars(args).items():
            if value is not None or key not in opt:
                opt[key] = value
        opt.run_config = config
        logging.getLogger(__name__).debug(f"options: {opt.toDict()}")
        return opt
