import logging
import sys

import _init_paths

from lib.commands import EXIT_CODES, run_command
from lib.errors import ConfigError
from lib.opts import opts


def setup_logging(level="INFO", log_file=None):
    handlers = [logging.StreamHandler(sys.stderr)]
    if log_file:
        handlers.append(logging.FileHandler(log_file))
    logging.basicConfig(
        level=getattr(logging, level),
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
        handlers=handlers,
        force=True,
    )


def main(args=""):
    parser = opts()
    pre = parser.parse(args)
    setup_logging(pre.log_level, pre.log_file)
    try:
        opt = parser.init(args)
    except ConfigError as e:
        for problem in e.errors:
            logging.error(f"config: {problem}")
        return EXIT_CODES["config"]
    except OSError as e:
        logging.error(f"cannot read configuration: {e}")
        return EXIT_CODES["io"]
    logging.info(f"running {opt.command} (m={opt.m}, sigma={opt.sigma}, backend={opt.backend}) -> {opt.out_dir}")
    return run_command(opt.command, opt.run_config, tqdm_flag=opt.tqdm)


if __name__ == "__main__":
    sys.exit(main())
