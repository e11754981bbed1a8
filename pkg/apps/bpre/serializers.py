from rest_framework import serializers


class ReducedSampleSerializer(serializers.Serializer):
    trial_index = serializers.IntegerField()
    S_r = serializers.FloatField()
    S_n = serializers.FloatField()
    S_tau = serializers.FloatField()
    tau_rn = serializers.IntegerField()
    Z_r = serializers.IntegerField()
    q_rn = serializers.FloatField()
    Z_rn = serializers.IntegerField()
    O_rn = serializers.FloatField()
    Delta_rn = serializers.FloatField()
