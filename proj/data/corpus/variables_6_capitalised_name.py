# exercise: variables
# pattern: typo-in-name
name_var = "Alice"
age_var = 20
print(Name_var)
print(age_var)
