"""Two-sided t critical values used by the interval fixtures."""
from scipy.stats import t

for df in (1, 4, 9, 29, 99):
    print(df, repr(t.ppf(0.975, df)), repr(t.ppf(0.995, df)))
