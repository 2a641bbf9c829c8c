# exercise: data_types
# pattern: unquoted-string
integer_var = 5
float_var = 2.5
string_var = hello
bool_var = True
print(type(integer_var))
print(type(float_var))
print(type(string_var))
print(type(bool_var))
