from rest_framework import serializers


class LawRowSerializer(serializers.Serializer):
    law_id = serializers.CharField()
    arg1 = serializers.FloatField()
    arg2 = serializers.FloatField(allow_null=True)
    value = serializers.FloatField()
    error = serializers.FloatField()
