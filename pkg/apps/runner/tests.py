import io
import os
import shutil
import tempfile
from unittest import mock

from django.core.management import call_command
from django.core.management.base import CommandError
from django.test import SimpleTestCase, override_settings
from django.conf import settings

from apps.bpre.constants import REGIME
from apps.runner.config import THREADS_VARIABLE, parse_config, parse_text
from apps.runner.constants import CHECK, EXIT, STATUS
from apps.runner.pipelines import (
    RunResult, collect_samples, exp_functional_row, genealogy_rows,
    horizon_ladder, run_scenario
)
from apps.runner.reports import REPORT_FILE, emit_report, header
from apps.stats.reports import ReportRow
from reducedbpre.exceptions import ConfigError

MINIMAL = 'scenario = thm1\nn = 2000\nseed = 7\n'

SMALL = dict(settings.REDUCED_BPRE, TRIALS=8000, BLOCK_SIZE=500,
             TARGET_ACCEPTED=10)


@mock.patch.dict(os.environ, {THREADS_VARIABLE: ''})
class ConfigTest(SimpleTestCase):
    def test_defaults(self):
        config = parse_config(MINIMAL)
        self.assertEqual((config.scenario, config.n, config.seed),
                         (REGIME.THM1, 2000, 7))
        self.assertEqual(config.alpha, 2.0)
        self.assertEqual(config.t, 1.0)
        self.assertEqual(config.threads, 1)
        self.assertIsNone(config.k)

    def test_comments_and_dashes(self):
        data = parse_text('# a run\ntarget-accepted = 10  # few\n\n')
        self.assertEqual(data, {'target_accepted': '10'})
        with self.assertRaises(ConfigError):
            parse_text('n 2000')

    def test_m_is_folded_into_r(self):
        config = parse_config(MINIMAL + 'k = 1990\nm = 20\n')
        self.assertEqual((config.k, config.r), (1990, 1980))
        with self.assertRaises(ConfigError):
            parse_config(MINIMAL + 'r = 1000\nm = 20\n')

    def test_ordering_violation(self):
        with self.assertRaises(ConfigError):
            parse_config(MINIMAL + 'k = 10\nm = 100\n')

    def test_unknown_and_missing_keys(self):
        with self.assertRaises(ConfigError) as cm:
            parse_config(MINIMAL + 'gamma = 3\n')
        self.assertIn('gamma', cm.exception.messages[0])
        with self.assertRaises(ConfigError):
            parse_config('scenario = thm1\nn = 2000\n')

    def test_bad_values(self):
        for line in ('alpha = 2.5', 'env = binomial', 't = -1', 'scenario = thm4'):
            with self.assertRaises(ConfigError):
                parse_config(MINIMAL + line + '\n')
        with self.assertRaises(ConfigError):
            parse_config('scenario = meander\nn = 100\nseed = 1\nalpha = 1.5\n')

    def test_text_round_trip(self):
        config = parse_config(MINIMAL + 'k = 1990\nr = 1980\nt = 1.5\n')
        self.assertEqual(parse_config(config.to_text()), config)

    def test_flags_override_text(self):
        config = parse_config(MINIMAL, {'n': 500, 'seed': None, 'out-dir': 'x'})
        self.assertEqual((config.n, config.seed, config.out_dir), (500, 7, 'x'))

    def test_threads_from_environment(self):
        with mock.patch.dict(os.environ, {THREADS_VARIABLE: '3'}):
            config = parse_config(MINIMAL, {'threads': 2})
        self.assertEqual(config.threads, 3)


class ReportTest(SimpleTestCase):
    def setUp(self):
        self.out_dir = tempfile.mkdtemp()
        self.addCleanup(shutil.rmtree, self.out_dir)
        with mock.patch.dict(os.environ, {THREADS_VARIABLE: ''}):
            self.config = parse_config(MINIMAL, {'out_dir': self.out_dir})

    def result(self, *passed):
        return RunResult(self.config, rows=[
            ReportRow(REGIME.THM1, REGIME.THM1, 'ks', 0.01, passed=p, n=2000)
            for p in passed])

    def read(self, name):
        with io.open(os.path.join(self.out_dir, name), encoding='utf-8') as f:
            return f.read()

    def test_empty_report(self):
        with self.assertRaises(ValueError):
            emit_report(self.result())

    def test_exit_codes(self):
        self.assertEqual(emit_report(self.result(True, True)), EXIT.PASS)
        self.assertEqual(emit_report(self.result(True, False)),
                         EXIT.STATISTICAL_FAILURE)
        lines = self.read(REPORT_FILE % 'csv').splitlines()
        self.assertTrue(lines[0].startswith('# reducedbpre'))
        self.assertTrue(lines[2].startswith('scenario,theorem,n,'))
        self.assertTrue(lines[3].endswith(',pass'))
        self.assertTrue(lines[4].endswith(',fail'))

    def test_json_report(self):
        emit_report(self.result(True), format='json')
        content = self.read(REPORT_FILE % 'json')
        self.assertIn('"pass":true', content)
        self.assertIn('"status":"complete"', content)

    def test_header_leaves_out_execution_keys(self):
        text = header(self.result(True))
        self.assertIn('seed=7', text)
        self.assertNotIn('threads', text)
        self.assertNotIn('out_dir', text)


@override_settings(REDUCED_BPRE=SMALL)
@mock.patch.dict(os.environ, {THREADS_VARIABLE: ''})
class PipelineTest(SimpleTestCase):
    def config(self, **flags):
        flags = dict(dict(scenario=REGIME.THM1, n=100, t=2.0, seed=3), **flags)
        return parse_config(flags=flags)

    def test_horizon_ladder(self):
        self.assertEqual(horizon_ladder(1000), [250, 500, 1000])
        self.assertEqual(horizon_ladder(4), [2, 4])

    def test_samples_do_not_depend_on_threads(self):
        scenario = self.config().scenario_spec()
        one, complete = collect_samples(scenario, 500, 1)
        four, complete_four = collect_samples(scenario, 500, 4)
        self.assertEqual(complete, complete_four)
        self.assertEqual(one.samples, four.samples)
        self.assertEqual(one.attempted, four.attempted)

    def test_exhausted_budget_is_partial(self):
        scenario = self.config(trials=500, target_accepted=10000).scenario_spec()
        merged, complete = collect_samples(scenario, 200, 2)
        self.assertFalse(complete)
        self.assertEqual(merged.attempted, 500)

    def test_genealogy_rows(self):
        rows = genealogy_rows(self.config())
        self.assertEqual([row.theorem for row in rows],
                         [CHECK.GENEALOGY, CHECK.CLOSED_FORM])
        self.assertTrue(all(row.passed for row in rows))

    def test_exp_functional_row(self):
        row = exp_functional_row(self.config(scenario=REGIME.WALK_ONLY))
        self.assertEqual(row.theorem, CHECK.EXP_FUNCTIONAL)
        self.assertEqual(row.n, 1000)
        self.assertTrue(row.passed)

    def test_reports_do_not_depend_on_threads(self):
        reports = []
        for threads in (1, 3):
            out_dir = tempfile.mkdtemp()
            self.addCleanup(shutil.rmtree, out_dir)
            result = run_scenario(self.config(threads=threads, out_dir=out_dir))
            self.assertIn(result.status, (STATUS.COMPLETE, STATUS.PARTIAL))
            emit_report(result)
            contents = []
            for name in sorted(os.listdir(out_dir)):
                with io.open(os.path.join(out_dir, name)) as f:
                    contents.append((name, f.read()))
            reports.append(contents)
        self.assertEqual(reports[0], reports[1])


@mock.patch.dict(os.environ, {THREADS_VARIABLE: ''})
class CommandTest(SimpleTestCase):
    def test_config_error_exit_code(self):
        with self.assertRaises(CommandError) as cm:
            call_command('run_scenario', scenario='thm1', n=2000, k=10, r=1900,
                         seed=1)
        self.assertEqual(cm.exception.returncode, EXIT.CONFIG_ERROR)

    def test_missing_config_file(self):
        with self.assertRaises(CommandError) as cm:
            call_command('run_scenario', config='/nonexistent/run.conf')
        self.assertEqual(cm.exception.returncode, EXIT.CONFIG_ERROR)
