"""
===========================
Soundness checks per rule
===========================

A short random walk through the calculus, checked step by step on random
finite algebras, summarized per rule.
"""
import matplotlib.pyplot as plt

from mustaralba import SoundnessOracle

report = SoundnessOracle(seed=1, algebra_count=10, formula_count=10, max_algebra_size=6).run()
summary = report.summary()
print(summary)

fig, ax = plt.subplots()
summary['checks'].plot.barh(ax=ax)
ax.set_xlabel('checks')
ax.set_title('%d violations, %d skipped checks' % (len(report.violations), summary['skipped'].sum()))
plt.tight_layout()
plt.show()
