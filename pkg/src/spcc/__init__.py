"""Software project control center.

Composes goal-oriented measurement pipelines from reusable control
components, detects plan deviations during execution, and serves
role-oriented visualization scenes to a cockpit.
"""

__version__ = "0.1.0"
