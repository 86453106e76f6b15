import os, sys, math, argparse, yaml
import numpy as np
from model import (
    GeometryError, ConfigError, InadmissibleStart, NonFiniteState, StopReason,
    admissible_intervals
)
from module import (
    RESIDUALS, load_params, load_alpha0, print_params_desc, anchor_summary,
    Integrator, integrate_profile, build_grid,
    Verifier, run_residual_suite, negative_control,
    write_grid_csv, write_grid_json, write_report_json, sweep, write_sweep_csv
)




EXIT_PASS = 0
EXIT_FAIL = 1
EXIT_DOMAIN = 2
EXIT_INTEGRATION = 3
EXIT_USAGE = 64

CONFIG_ENV = 'PMCLAB_CONFIG'
DEFAULTS_PATH = os.path.join(os.path.dirname(os.path.abspath(__file__)), 'config.yaml')

DEFAULT_OUT = {
    'family': 'out/family.{fmt}',
    'verify': 'out/report.json',
    'sweep': 'out/sweep.csv'
}




def _coerce(key, value, default):
    """Casts a text value from the flat config file to the type of its yaml default."""
    text = str(value).strip()
    try:
        if isinstance(default, bool):
            if text.lower() not in ('true', 'false', '1', '0', 'yes', 'no'):
                raise ValueError(text)
            return text.lower() in ('true', '1', 'yes')
        if isinstance(default, int):
            return int(text)
        if isinstance(default, float):
            return float(text)
        if isinstance(default, list):
            return [float(x) for x in text.replace(',', ' ').split()]
    except ValueError as err:
        raise ConfigError(f"bad value for {key}: {value!r}") from err

    if default is None:
        if text.lower() in ('none', 'null', ''):
            return None
        try:
            return float(text)
        except ValueError:
            return text
    return text



def _float(key, value):
    try:
        return float(value)
    except (TypeError, ValueError) as err:
        raise ConfigError(f"bad value for {key}: {value!r}") from err



def read_flat_config(path):
    """`key = value` lines; '#' starts a comment; keys mirror the flag names."""
    if not os.path.exists(path):
        raise ConfigError(f"config file not found: {path}")

    entries = {}
    with open(path, 'r', encoding='utf-8') as f:
        for lineno, line in enumerate(f, 1):
            line = line.split('#', 1)[0].strip()
            if not line:
                continue
            key, sep, value = line.partition('=')
            if not sep or not key.strip():
                raise ConfigError(f"{path}:{lineno}: expected 'key = value'")
            entries[key.strip().replace('-', '_')] = value.strip()
    return entries




class Config(object):
    def __init__(self, args, tolerances=None):

        with open(DEFAULTS_PATH, 'r') as f:
            params = yaml.load(f, Loader=yaml.FullLoader)
            for group in params.keys():
                for key, val in params[group].items():
                    setattr(self, key, val)
        self.tol = dict(self.tol or {})

        #flat file, then flags
        path = getattr(args, 'config', None) or os.environ.get(CONFIG_ENV)
        if path:
            for key, val in read_flat_config(path).items():
                self.update(key, val, from_text=True)

        for key, val in vars(args).items():
            if key in ('command', 'config') or val is None:
                continue
            self.update(key, val)
        for name, val in (tolerances or {}).items():
            self.update(f'tol.{name}', val)

        self.command = args.command
        self.check()


    def update(self, key, val, from_text=False):
        if key.startswith('tol.'):
            name = key[4:]
            if name not in RESIDUALS:
                raise ConfigError(f"unknown residual name: {name}")
            self.tol[name] = _float(key, val)
            return

        if not hasattr(self, key):
            raise ConfigError(f"unknown config key: {key}")
        if from_text:
            val = _coerce(key, val, getattr(self, key))
        setattr(self, key, val)


    def check(self):
        def finite(key, positive=False, nonnegative=False):
            val = _float(key, getattr(self, key))
            if not math.isfinite(val):
                raise ConfigError(f"{key} must be finite")
            if positive and not val > 0.0:
                raise ConfigError(f"{key} must be positive")
            if nonnegative and val < 0.0:
                raise ConfigError(f"{key} must be nonnegative")
            setattr(self, key, val)

        for key in ('b', 'c3', 'rho_scale'):
            finite(key)
        for key in ('h', 'delta', 'v_step'):
            finite(key, positive=True)
        finite('u_span', nonnegative=True)
        if self.alpha0 is not None:
            finite('alpha0')
        if self.h_min is not None:
            finite('h_min', positive=True)
        if not 0.0 <= float(self.band) < 0.5:
            raise ConfigError("band must lie in [0, 0.5)")

        self.v_count, self.steps, self.samples = int(self.v_count), int(self.steps), int(self.samples)
        if self.v_count < 1 or self.steps < 1 or self.samples < 1:
            raise ConfigError("v_count, steps and samples must be positive")
        if len(self.c3_range) != 2:
            raise ConfigError("c3_range needs two values")
        self.c3_range = [float(x) for x in self.c3_range]

        self.format = str(self.format).lower()
        if self.format not in ('csv', 'json'):
            raise ConfigError(f"unknown output format: {self.format}")
        for val in self.tol.values():
            if not val >= 0.0:
                raise ConfigError("tolerances must be nonnegative")


    @property
    def v_nodes(self):
        return np.arange(self.v_count) * self.v_step


    @property
    def out_path(self):
        if self.out:
            return str(self.out)
        return DEFAULT_OUT[self.command].format(fmt=self.format)


    def print_attr(self):
        for attribute, value in self.__dict__.items():
            print(f"* {attribute}: {value}")




class UsageParser(argparse.ArgumentParser):
    def error(self, message):
        raise ConfigError(message)



def build_parser():
    common = UsageParser(add_help=False)
    common.add_argument('--config', default=None)
    common.add_argument('--b', type=float, default=None)
    common.add_argument('--c3', type=float, default=None)
    common.add_argument('--out', default=None)
    common.add_argument('--verbose', action='store_true', default=None)

    family = UsageParser(add_help=False)
    family.add_argument('--branch', default=None)
    family.add_argument('--im-sign', default=None)
    family.add_argument('--alpha-side', default=None)
    family.add_argument('--alpha0', type=float, default=None)
    family.add_argument('--u-span', type=float, default=None)
    family.add_argument('--h', type=float, default=None)
    family.add_argument('--h-min', type=float, default=None)
    family.add_argument('--delta', type=float, default=None)
    family.add_argument('--v-count', type=int, default=None)
    family.add_argument('--v-step', type=float, default=None)

    parser = UsageParser(prog='run.py')
    commands = parser.add_subparsers(dest='command', required=True)

    commands.add_parser('interval', parents=[common])

    cmd = commands.add_parser('family', parents=[common, family])
    cmd.add_argument('--format', default=None)

    cmd = commands.add_parser('verify', parents=[common, family])
    cmd.add_argument('--rho-scale', type=float, default=None)
    cmd.add_argument('--band', type=float, default=None)

    cmd = commands.add_parser('sweep', parents=[common])
    cmd.add_argument('--c3-range', type=float, nargs=2, default=None)
    cmd.add_argument('--steps', type=int, default=None)
    cmd.add_argument('--samples', type=int, default=None)

    return parser



def split_tolerances(argv):
    """Pulls `--tol.<name> value` and `--tol.<name>=value` out of argv."""
    rest, tolerances = [], {}
    tokens = iter(argv)
    for token in tokens:
        if not token.startswith('--tol.'):
            rest.append(token)
            continue
        name, sep, value = token[len('--tol.'):].partition('=')
        if not sep:
            value = next(tokens, None)
            if value is None:
                raise ConfigError(f"{token} needs a value")
        tolerances[name] = _float(token, value)
    return rest, tolerances




def cmd_interval(config):
    for interval in admissible_intervals(config.c3):
        print(f"sin²α ∈ {interval.describe()}")
        print(f"branch: {interval.branch.value}")
    return EXIT_PASS



def _profile(config):
    params = load_params(config)
    alpha0 = load_alpha0(config, params)
    print_params_desc(params)
    K0, c0 = anchor_summary(alpha0, params)
    print(f"Start | alpha0: {alpha0:.6f} | K: {K0:.7f} | |c|: {c0:.7f}")

    profile = integrate_profile(params, alpha0, config.u_span, config.h, h_min=config.h_min)
    Integrator.print_summary(profile)
    return params, profile



def cmd_family(config):
    params, profile = _profile(config)
    grid = build_grid(profile, config.v_nodes)

    writer = write_grid_json if config.format == 'json' else write_grid_csv
    path = writer(grid, config.out_path)
    print(f"Wrote {path}")

    if profile.stop_reason is StopReason.STEP_UNDERFLOW:
        print(f"cmd_family: integration failed ({profile.stop_reason.value})", file=sys.stderr)
        return EXIT_INTEGRATION
    if profile.stop_reason is StopReason.ENDPOINT_PROXIMITY:
        print(f"cmd_family: halted early at u={profile.u_nodes[-1]:g} ({profile.stop_reason.value})", file=sys.stderr)
    return EXIT_PASS



def cmd_verify(config):
    tolerances = config.tol or None

    if config.rho_scale != 1.0:
        params = load_params(config)
        print_params_desc(params)
        report = negative_control(
            params, config.rho_scale, load_alpha0(config, params), config.u_span,
            config.h, config.v_nodes, tolerances, band=config.band
        )
    else:
        params, profile = _profile(config)
        grid = build_grid(profile, config.v_nodes)
        report = run_residual_suite(
            grid, config.h, tolerances, band=config.band,
            exclude_boundary=config.exclude_boundary
        )

    Verifier.print_report(report)
    path = write_report_json(report, config.out_path)
    print(f"Wrote {path}")

    if not report.verdict:
        print(f"cmd_verify: failing residuals {report.failing()}", file=sys.stderr)
        return EXIT_FAIL
    return EXIT_PASS



def cmd_sweep(config):
    lo, hi = config.c3_range
    rows = sweep(config.b, lo, hi, config.steps, config.samples)
    path = write_sweep_csv(rows, config.out_path)

    #bound_ok / gamma_ok are None where the bound does not apply
    bad = [row for row in rows if row[-2] is False or row[-1] is False]
    print(f"Sweep | c3 in [{lo:g}, {hi:g}] | rows: {len(rows)} | violations: {len(bad)}")
    print(f"Wrote {path}")
    return EXIT_FAIL if bad else EXIT_PASS



COMMANDS = {
    'interval': cmd_interval,
    'family': cmd_family,
    'verify': cmd_verify,
    'sweep': cmd_sweep
}




def main(argv=None):
    argv = sys.argv[1:] if argv is None else list(argv)

    try:
        argv, tolerances = split_tolerances(argv)
        args = build_parser().parse_args(argv)
        config = Config(args, tolerances)
        if config.verbose:
            config.print_attr()
        return COMMANDS[config.command](config)

    except ConfigError as err:
        print(f"usage error: {err}", file=sys.stderr)
        return EXIT_USAGE
    except (InadmissibleStart, NonFiniteState) as err:
        print(f"integration failure: {type(err).__name__}: {err}", file=sys.stderr)
        return EXIT_INTEGRATION
    except GeometryError as err:
        print(f"domain error: {type(err).__name__}: {err}", file=sys.stderr)
        return EXIT_DOMAIN




if __name__ == '__main__':
    sys.exit(main())
