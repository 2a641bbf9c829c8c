# exercise: comparison
# pattern: semantic
num1 = 9
num2 = 4
greater_result = True
equal_result = num1 == num2
print(greater_result)
print(equal_result)
num1 = 6
num2 = 6
greater_result = True
equal_result = num1 == num2
print(greater_result)
print(equal_result)
