import io
import logging

from django.core.management.base import BaseCommand, CommandError

from apps.envs.constants import FAMILY
from apps.runner.config import parse_config
from apps.runner.constants import EXIT, FORMAT, SCENARIO
from apps.runner.pipelines import run_scenario
from apps.runner.reports import emit_report
from apps.stats.reports import failing
from reducedbpre.exceptions import ConfigError, WorkbenchError

logger = logging.getLogger('runner.commands')

FLAGS = (
    ('--scenario', dict(choices=[c for c, _ in SCENARIO.CHOICES])),
    ('--n', dict(type=int)),
    ('--k', dict(type=int)),
    ('--r', dict(type=int)),
    ('--theta', dict(type=float)),
    ('--t', dict(type=float)),
    ('--alpha', dict(type=float)),
    ('--beta', dict(type=float)),
    ('--env', dict(choices=[c for c, _ in FAMILY.CHOICES])),
    ('--trials', dict(type=int)),
    ('--target-accepted', dict(type=int)),
    ('--seed', dict(type=int)),
    ('--threads', dict(type=int)),
    ('--out-dir', dict()),
    ('--format', dict(choices=[c for c, _ in FORMAT.CHOICES])),
)


class Command(BaseCommand):
    help = 'Run one scenario of the reduced-process workbench and write its report.'

    def add_arguments(self, parser):
        parser.add_argument('--config', help='flat key = value config file')
        for flag, options in FLAGS:
            parser.add_argument(flag, **options)

    def handle(self, *args, **options):
        text = None
        if options.get('config'):
            try:
                with io.open(options['config'], encoding='utf-8') as f:
                    text = f.read()
            except IOError as e:
                raise CommandError(str(e), returncode=EXIT.CONFIG_ERROR)
        keys = [flag[2:].replace('-', '_') for flag, _ in FLAGS]
        flags = dict((key, options.get(key)) for key in keys)
        try:
            config = parse_config(text, flags)
        except ConfigError as e:
            raise CommandError('invalid config: %s' % '; '.join(e.messages),
                               returncode=EXIT.CONFIG_ERROR)

        try:
            result = run_scenario(config)
        except WorkbenchError as e:
            logger.exception('')
            raise CommandError(str(e), returncode=EXIT.STATISTICAL_FAILURE)
        try:
            code = emit_report(result)
        except ValueError as e:
            raise CommandError(str(e), returncode=EXIT.CONFIG_ERROR)

        for row in failing(result.rows):
            self.stderr.write('FAIL %s %s %s = %s (%s)' % (
                row.scenario, row.theorem, row.statistic, row.value, row.reference))
        if code != EXIT.PASS:
            raise CommandError('%d report rows failed' % len(failing(result.rows)),
                               returncode=code)
        self.stdout.write('all %d report rows passed' % len(result.rows))
