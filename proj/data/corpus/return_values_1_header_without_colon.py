# exercise: return_values
# pattern: missing-colon
def add(num1, num2) # Missing colon at the end
    return num1 + num2

result = add(2, 6)
print(result)
