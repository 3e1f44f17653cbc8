"""Exact desk-scale reasoning for default logic, autoepistemic logic, circumscription and abduction."""
