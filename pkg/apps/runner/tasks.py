import logging

from celery import Task

from apps.bpre.trials import run_trial_block
from reducedbpre.celery import app

logger = logging.getLogger('runner.tasks')


class RunTrialBlock(Task):
    name = 'runner.run_trial_block'

    def run(self, scenario, block_index, block_size):
        logger.debug('RunTrialBlock %s n=%d block %d' % (
            scenario.regime, scenario.n, block_index
        ))
        try:
            return run_trial_block(scenario, block_index, block_size)
        except:
            logger.exception('')
            raise


run_trial_block_task = app.register_task(RunTrialBlock())
