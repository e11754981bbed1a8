from rest_framework import serializers


class ReportRowSerializer(serializers.Serializer):
    scenario = serializers.CharField()
    theorem = serializers.CharField()
    n = serializers.IntegerField(allow_null=True)
    k = serializers.IntegerField(allow_null=True)
    r = serializers.IntegerField(allow_null=True)
    t = serializers.FloatField(allow_null=True)
    accepted = serializers.IntegerField(allow_null=True)
    statistic = serializers.CharField()
    value = serializers.FloatField()
    ci_low = serializers.FloatField(allow_null=True)
    ci_high = serializers.FloatField(allow_null=True)
    reference = serializers.CharField(allow_blank=True)
    passed = serializers.BooleanField()

    def to_representation(self, instance):
        data = super(ReportRowSerializer, self).to_representation(instance)
        data['pass'] = data.pop('passed')
        return data
