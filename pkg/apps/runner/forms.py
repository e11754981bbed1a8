from django import forms
from django.conf import settings
from django.core.exceptions import ValidationError

from apps.bpre.constants import REGIME
from apps.bpre.scenarios import ScenarioSpec
from apps.envs.constants import FAMILY
from apps.envs.environments import EnvironmentModel
from apps.runner.constants import FORMAT, SCENARIO
from apps.stable.laws import StableSpec


def validate_positive(value):
    if not value > 0:
        raise ValidationError('must be positive, got %(value)s',
                              params={'value': value})


class RunConfigForm(forms.Form):
    """Every key a run config may carry; missing values fall back to
    settings.REDUCED_BPRE."""
    scenario = forms.ChoiceField(choices=SCENARIO.CHOICES, required=False)
    n = forms.IntegerField(min_value=2)
    k = forms.IntegerField(min_value=1, required=False)
    r = forms.IntegerField(min_value=1, required=False)
    m = forms.IntegerField(min_value=1, required=False)
    theta = forms.FloatField(required=False, validators=[validate_positive])
    t = forms.FloatField(required=False, validators=[validate_positive])
    alpha = forms.FloatField(required=False)
    beta = forms.FloatField(required=False)
    c = forms.FloatField(required=False, validators=[validate_positive])
    env = forms.ChoiceField(choices=FAMILY.CHOICES, required=False)
    trials = forms.IntegerField(min_value=1, required=False)
    target_accepted = forms.IntegerField(min_value=1, required=False)
    block_size = forms.IntegerField(min_value=1, required=False)
    seed = forms.IntegerField(min_value=0)
    threads = forms.IntegerField(min_value=1, required=False)
    out_dir = forms.CharField(required=False)
    format = forms.ChoiceField(choices=FORMAT.CHOICES, required=False)
    meander_s = forms.FloatField(min_value=0.0, max_value=1.0, required=False)

    def clean(self):
        cleaned_data = super(RunConfigForm, self).clean()
        defaults = settings.REDUCED_BPRE
        for name in self.fields:
            if cleaned_data.get(name) in (None, '') and name.upper() in defaults:
                cleaned_data[name] = defaults[name.upper()]
        if self.errors:
            return cleaned_data

        n, r, m = cleaned_data['n'], cleaned_data.get('r'), cleaned_data.get('m')
        if m is not None:
            if r is not None and r + m != n:
                raise ValidationError('r=%(r)d and m=%(m)d do not add up to n',
                                      params={'r': r, 'm': m})
            if m >= n:
                raise ValidationError('m must be smaller than n')
            cleaned_data['r'] = n - m
        cleaned_data['m'] = None

        if cleaned_data['scenario'] == REGIME.MEANDER and cleaned_data['alpha'] != 2:
            raise ValidationError('the meander scenario needs alpha = 2')
        try:
            spec = StableSpec(cleaned_data['alpha'], cleaned_data['beta'],
                              cleaned_data.get('c'))
            model = EnvironmentModel(cleaned_data['env'], spec)
            if cleaned_data['scenario'] != SCENARIO.THETA:
                ScenarioSpec(model, n, cleaned_data['scenario'],
                             t=cleaned_data['t'], theta=cleaned_data['theta'],
                             k=cleaned_data.get('k'), r=cleaned_data.get('r'),
                             meander_s=cleaned_data['meander_s'])
        except ValueError as e:
            raise ValidationError(str(e))
        return cleaned_data
