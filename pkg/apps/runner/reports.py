import csv
import io
import logging
import os

from django.conf import settings
from rest_framework.renderers import JSONRenderer

from apps.bpre.constants import SAMPLE_COLUMNS, SAMPLE_SCHEMA_VERSION
from apps.bpre.serializers import ReducedSampleSerializer
from apps.limits.constants import LAW_COLUMNS
from apps.limits.serializers import LawRowSerializer
from apps.runner.constants import EXECUTION_KEYS, EXIT, FORMAT
from apps.stats.reports import REPORT_COLUMNS, all_passed, failing
from apps.stats.serializers import ReportRowSerializer

logger = logging.getLogger('runner.reports')

SAMPLES_FILE = 'samples.csv'
LAWS_FILE = 'laws.csv'
RENEWAL_FILE = 'renewal.csv'
REPORT_FILE = 'report.%s'


def config_echo(config):
    return [(key, value) for key, value in config.items()
            if key not in EXECUTION_KEYS]


def header(result):
    config = settings.REDUCED_BPRE
    return (
        '# reducedbpre %s schema %d status %s\n# config: %s\n' % (
            config['VERSION'], SAMPLE_SCHEMA_VERSION, result.status,
            '; '.join('%s=%s' % item for item in config_echo(result.config)))
    )


def to_csv(result, columns, records):
    out = io.StringIO()
    out.write(header(result))
    writer = csv.DictWriter(out, columns, lineterminator='\n')
    writer.writeheader()
    for record in records:
        writer.writerow(dict((key, record[key]) for key in columns))
    return out.getvalue()


def report_records(rows):
    return ReportRowSerializer(rows, many=True).data


def report_json(result):
    return JSONRenderer().render({
        'version': settings.REDUCED_BPRE['VERSION'],
        'schema': SAMPLE_SCHEMA_VERSION,
        'status': result.status,
        'config': dict(config_echo(result.config)),
        'rows': report_records(result.rows),
    })


def _write(path, content):
    mode = 'wb' if isinstance(content, bytes) else 'w'
    with open(path, mode) as f:
        f.write(content)
    logger.info('wrote %s', path)


def emit_report(result, format=None, out_dir=None):
    """Write the report (and samples and law tables when present) to
    ``out_dir``; returns the exit code of the run."""
    if not result.rows:
        raise ValueError('run produced no report rows')
    format = format or result.config.format
    if format not in dict(FORMAT.CHOICES):
        raise ValueError('unknown report format %r' % format)
    out_dir = out_dir or result.config.out_dir
    if not os.path.isdir(out_dir):
        os.makedirs(out_dir)

    if format == FORMAT.JSON:
        _write(os.path.join(out_dir, REPORT_FILE % format), report_json(result))
    else:
        records = [dict(r, **{'pass': 'pass' if r['pass'] else 'fail'})
                   for r in report_records(result.rows)]
        _write(os.path.join(out_dir, REPORT_FILE % format),
               to_csv(result, REPORT_COLUMNS, records))
    if result.samples:
        _write(os.path.join(out_dir, SAMPLES_FILE), to_csv(
            result, SAMPLE_COLUMNS,
            ReducedSampleSerializer(result.samples, many=True).data))
    if result.laws:
        rows = [row for table in result.laws for row in table.rows()]
        _write(os.path.join(out_dir, LAWS_FILE), to_csv(
            result, LAW_COLUMNS, LawRowSerializer(rows, many=True).data))
    if result.renewal is not None:
        _write(os.path.join(out_dir, RENEWAL_FILE),
               header(result) + result.renewal.to_csv())

    if all_passed(result.rows):
        return EXIT.PASS
    for row in failing(result.rows):
        logger.warning('failed: %s %s %s = %s (%s)', row.scenario, row.theorem,
                       row.statistic, row.value, row.reference)
    return EXIT.STATISTICAL_FAILURE
