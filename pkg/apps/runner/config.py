"""Run configuration: flat ``key = value`` text plus command-line flags."""
import logging
import os
from dataclasses import dataclass, fields

from apps.bpre.scenarios import ScenarioSpec
from apps.envs.environments import EnvironmentModel
from apps.runner.forms import RunConfigForm
from apps.stable.laws import StableSpec
from reducedbpre.exceptions import ConfigError

logger = logging.getLogger('runner.config')

THREADS_VARIABLE = 'REDUCED_BPRE_THREADS'


@dataclass(frozen=True)
class RunConfig:
    scenario: str
    n: int
    seed: int
    alpha: float
    beta: float
    env: str
    t: float
    theta: float
    trials: int
    target_accepted: int
    block_size: int
    threads: int
    out_dir: str
    format: str
    meander_s: float
    k: int = None
    r: int = None
    c: float = None

    @property
    def spec(self):
        return StableSpec(self.alpha, self.beta, self.c)

    @property
    def model(self):
        return EnvironmentModel(self.env, self.spec)

    def scenario_spec(self, n=None):
        """ScenarioSpec at horizon ``n``; k and r given explicitly only
        apply at the configured horizon."""
        explicit = n is None or n == self.n
        return ScenarioSpec(
            self.model, self.n if n is None else n, self.scenario,
            t=self.t, theta=self.theta,
            target_accepted=self.target_accepted, max_trials=self.trials,
            seed=self.seed,
            k=self.k if explicit else None, r=self.r if explicit else None,
            meander_s=self.meander_s)

    def items(self):
        """(key, value) pairs in canonical order, unset keys left out."""
        for f in fields(self):
            value = getattr(self, f.name)
            if value is not None:
                yield f.name, value

    def to_text(self):
        return ''.join('%s = %s\n' % (key, value) for key, value in self.items())


def parse_text(text):
    """Flat ``key = value`` lines; ``#`` starts a comment, dashes in keys
    read as underscores."""
    data = {}
    for number, line in enumerate(text.splitlines(), 1):
        line = line.split('#', 1)[0].strip()
        if not line:
            continue
        if '=' not in line:
            raise ConfigError('line %d: expected key = value' % number)
        key, value = [part.strip() for part in line.split('=', 1)]
        data[key.replace('-', '_')] = value
    return data


def parse_config(text=None, flags=None):
    """RunConfig from config text and flags; flags override the text and
    REDUCED_BPRE_THREADS overrides both for the thread count."""
    data = parse_text(text) if text else {}
    for key, value in (flags or {}).items():
        if value is not None:
            data[key.replace('-', '_')] = value
    if os.environ.get(THREADS_VARIABLE):
        data['threads'] = os.environ[THREADS_VARIABLE]

    unknown = sorted(set(data) - set(RunConfigForm.base_fields))
    if unknown:
        raise ConfigError('unknown config keys: %s' % ', '.join(unknown))

    form = RunConfigForm(data)
    if not form.is_valid():
        errors = '; '.join(
            '%s: %s' % (field, ' '.join(messages))
            for field, messages in sorted(form.errors.items()))
        raise ConfigError(errors)
    cleaned = form.cleaned_data
    names = set(f.name for f in fields(RunConfig))
    config = RunConfig(**dict((k, v) for k, v in cleaned.items() if k in names))
    logger.debug('run config: %s', config)
    return config
