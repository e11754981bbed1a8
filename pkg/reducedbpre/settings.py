# Django settings for reducedbpre project.
import os.path

PROJECT_ROOT = os.path.normpath(os.path.dirname(__file__))

DEBUG = True

# No models are stored; the test runner still expects a configured alias.
DATABASES = {
    'default': {
        'ENGINE': 'django.db.backends.sqlite3',
        'NAME': ':memory:',
    }
}

TIME_ZONE = 'UTC'
USE_TZ = True
LANGUAGE_CODE = 'en'

# Make this unique, and don't share it with anybody.
SECRET_KEY = 'reducedbpre-local-workbench-key'

INSTALLED_APPS = (
    'django.contrib.contenttypes',
    'rest_framework',

    'apps.stable',
    'apps.walk',
    'apps.envs',
    'apps.bpre',
    'apps.limits',
    'apps.stats',
    'apps.runner',
)

DEFAULT_AUTO_FIELD = 'django.db.models.AutoField'

# Renderers are used off-request for report files.
REST_FRAMEWORK = {
    'DEFAULT_RENDERER_CLASSES': ('rest_framework.renderers.JSONRenderer',),
    'UNAUTHENTICATED_USER': None,
}

# Workbench defaults; every key can be overridden by a run config.
REDUCED_BPRE = {
    'VERSION': '1.0.0',

    'SCENARIO': 'thm1',
    'ALPHA': 2.0,
    'BETA': 0.0,
    'ENV': 'linear_fractional',
    'T': 1.0,
    'THETA': 1.0,
    'MEANDER_S': 0.5,

    'TRIALS': 200000,
    'TARGET_ACCEPTED': 5000,
    'BLOCK_SIZE': 2000,
    'THREADS': 1,
    'FORMAT': 'csv',
    'OUT_DIR': 'out',

    'POPULATION_CAP': 10 ** 12,

    'PATHS': 100000,
    'TIME_STEPS': 1000,
    'QUAD_LIMIT': 256,
    'MEANDER_WALK_LENGTH': 10000,
    'MEANDER_PATHS': 5000,
    'EVENT_TRIALS': 20000,
    'RENEWAL_HORIZON': 10000,
    'RENEWAL_PATHS': 2000,
    'THETA_J': 30,
    'THETA_K': 1000,
    'THETA_HORIZON': 500,
    'LAW_GRID_POINTS': 41,
}

CELERY_TASK_ALWAYS_EAGER = True
CELERY_TASK_EAGER_PROPAGATES = True

LOGGING = {
    'version': 1,
    'disable_existing_loggers': False,
    'formatters': {
        'standard': {
            'format' : "[%(asctime)s] %(levelname)s [%(name)s:%(lineno)s] %(message)s",
            'datefmt' : "%d/%b/%Y %H:%M:%S"
        },
    },
    'handlers': {
        'console':{
            'level': 'INFO',
            'class': 'logging.StreamHandler',
            'formatter': 'standard',
        },
        'logfile': {
            'level':'DEBUG',
            'class':'logging.handlers.RotatingFileHandler',
            'filename': "/tmp/reducedbpre.log",
            'maxBytes': 500000,
            'backupCount': 2,
            'formatter': 'standard',
        },
    },
    'loggers': {
        'stable': {
            'handlers': ['logfile'],
            'level': 'INFO',
        },
        'walk': {
            'handlers': ['logfile'],
            'level': 'INFO',
        },
        'envs': {
            'handlers': ['logfile'],
            'level': 'INFO',
        },
        'bpre': {
            'handlers': ['console', 'logfile'],
            'level': 'INFO',
        },
        'limits': {
            'handlers': ['logfile'],
            'level': 'INFO',
        },
        'stats': {
            'handlers': ['logfile'],
            'level': 'INFO',
        },
        'runner': {
            'handlers': ['console', 'logfile'],
            'level': 'INFO',
        },
    }
}


for conf in (os.path.join(os.path.dirname(PROJECT_ROOT), 'reducedbpre.conf'),
             '/etc/reducedbpre.conf'):
    try:
        with open(conf) as f:
            exec(compile(f.read(), conf, 'exec'))
        break
    except IOError:
        pass
