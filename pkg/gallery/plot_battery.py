"""
===================
The algebra battery
===================

Sizes and irreducibles of the fixed algebra battery.
"""
import matplotlib.pyplot as plt
import pandas as pd

from mustaralba import battery

frame = pd.DataFrame([A.summary() for A in battery()])
print(frame.to_string(index=False))

fig, ax = plt.subplots()
frame.set_index('name')['size'].plot.bar(ax=ax)
ax.set_ylabel('elements')
plt.tight_layout()
plt.show()
