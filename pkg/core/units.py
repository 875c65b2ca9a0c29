"""Unit conventions shared by every module.

Output and consumption are in trillions of 2005 USD per year, emissions in
GtCO2 per year, carbon reservoirs in GtC, prices in USD per tCO2, population in
billions (so consumption per capita is in thousands of USD per year).
"""

# USD/tCO2 multiplied by GtCO2 gives billions of USD; this converts to trillions.
TRILLIONS_PER_USD_GTCO2 = 1e-3

# Default carbon mass conversion. The run-time value lives in ClimateParams.
GTCO2_PER_GTC = 3.664

CAPITAL_FLOOR = 1e-6
TFP_SCALE_FLOOR = 1e-12
DAMAGE_CEILING = 1.0 - 1e-6
CONSUMPTION_FLOOR = 1e-4

# Damage functions are calibrated up to this warming; beyond it values are flagged.
VALIDATED_WARMING_C = 20.0
