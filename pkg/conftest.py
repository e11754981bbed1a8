import os

import django


os.environ.setdefault('DJANGO_SETTINGS_MODULE', 'reducedbpre.settings')
django.setup()
